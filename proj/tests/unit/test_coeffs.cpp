#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cmv/coeffs.hpp"
#include "cmv/errors.hpp"
#include "support/oracles.hpp"

using namespace cmv;

TEST(Coeffs, ConstantZeroHasUnitRho) {
  const auto seq = make_constant(0.0);
  for (long n = 0; n < 50; ++n) {
    EXPECT_EQ(seq.alpha(n), cplx{});
    EXPECT_EQ(seq.rho(n), 1.0);
  }
}

TEST(Coeffs, RhoIdentityOnRandomValues) {
  std::mt19937_64 rng(7);
  std::vector<cplx> v(200);
  for (auto& a : v) a = oracle::random_in_disk(rng, 0.999);
  const auto seq = make_explicit(v);
  for (long n = 0; n < 200; ++n) {
    EXPECT_NEAR(seq.rho(n) * seq.rho(n) + std::norm(seq.alpha(n)), 1.0, 1e-15);
    EXPECT_LT(std::abs(seq.alpha(n)), 1.0);
  }
  EXPECT_EQ(seq.alpha(500), cplx{});
}

TEST(Coeffs, GoldenSturmianMatchesSubstitutionWord) {
  const std::size_t n = 100000;
  const auto word = oracle::fibonacci_word(n);
  EXPECT_EQ(sturmian_indicator(kGoldenFrequency, 0), 0);
  for (std::size_t k = 1; k < n; ++k) {
    ASSERT_EQ(sturmian_indicator(kGoldenFrequency, static_cast<long>(k)), word[k - 1]) << k;
  }
}

TEST(Coeffs, SturmianLettersAndSupport) {
  const auto seq = make_sturmian(0.5, -0.5, kGoldenFrequency);
  const auto word = oracle::fibonacci_word(1000);
  for (long n = 1; n < 1000; ++n) {
    EXPECT_EQ(seq.alpha(n), word[static_cast<std::size_t>(n - 1)] ? cplx{0.5} : cplx{-0.5});
  }
  EXPECT_THROW((void)seq.alpha(-1), SupportError);
  const auto two = make_sturmian(0.5, -0.5, kGoldenFrequency, Support::two_sided);
  for (long n = -50; n < 50; ++n) {
    const int v = static_cast<int>(std::floor((n + 1) * kGoldenFrequency) - std::floor(n * kGoldenFrequency));
    EXPECT_EQ(two.alpha(n), v ? cplx{0.5} : cplx{-0.5}) << n;
  }
}

TEST(Coeffs, GoldenFloorExactAgainstLongDouble) {
  // Exact integer evaluation agrees with extended precision where the latter is safe.
  for (long k = -5000; k <= 5000; ++k) {
    const long double x = static_cast<long double>(k) * ((std::sqrt(5.0L) - 1.0L) / 2.0L);
    EXPECT_EQ(floor_multiple(kGoldenFrequency, k), static_cast<long>(std::floor(x))) << k;
  }
}

TEST(Coeffs, DensityOfOnesApproachesOmega) {
  for (double w : {kGoldenFrequency, 0.3819660112501051, 0.41421356237309503}) {
    long ones = 0;
    const long N = 100000;
    for (long n = 0; n < N; ++n) ones += sturmian_indicator(w, n);
    EXPECT_NEAR(static_cast<double>(ones) / N, w, 2.0 / N);
  }
}

TEST(Coeffs, RejectsBadInputs) {
  EXPECT_THROW(make_constant(1.0), ModulusError);
  EXPECT_THROW(make_sturmian(0.5, 1.2, kGoldenFrequency), ModulusError);
  EXPECT_THROW(make_sturmian(0.5, 0.1, 1.5), FrequencyRangeError);
  EXPECT_THROW(make_sturmian(0.5, 0.1, 0.0), FrequencyRangeError);
  EXPECT_THROW(make_explicit({0.1, 0.2}, -1), SupportError);
  EXPECT_THROW(make_constant(0.2).rotated(cplx{2.0, 0.0}), ModulusError);
}

TEST(Coeffs, RotationAndShift) {
  const auto seq = make_sturmian(0.5, cplx(0.1, 0.3), kGoldenFrequency);
  const cplx l = std::polar(1.0, 0.7);
  const auto rot = seq.rotated(l);
  const auto sh = seq.shifted(5);
  for (long n = 0; n < 40; ++n) {
    EXPECT_NEAR(std::abs(rot.alpha(n) - l * seq.alpha(n)), 0.0, 1e-15);
    EXPECT_EQ(sh.alpha(n), seq.alpha(n + 5));
  }
}

TEST(Coeffs, TwoSidedComposition) {
  const auto pos = make_constant(0.3);
  const auto neg = make_constant(-0.2);
  const auto two = extend_two_sided(pos, neg);
  EXPECT_EQ(two.alpha(0), cplx{0.3});
  EXPECT_EQ(two.alpha(-1), cplx{-0.2});
  const auto filled = with_left_filler(pos, cplx{0.1, 0.1});
  EXPECT_EQ(filled.alpha(-7), cplx(0.1, 0.1));
  EXPECT_EQ(filled.alpha(7), cplx{0.3});
}

TEST(Coeffs, TransformRules) {
  const auto base = make_explicit({0.1, 0.2, 0.3}, -1, Support::two_sided);
  SequenceTransform t;
  t.conjugate = true;
  t.sign = -1;
  t.offset = -2;
  t.support = Support::two_sided;
  const auto refl = VerblunskySequence::transformed(base, t);
  EXPECT_EQ(refl.alpha(0), std::conj(base.alpha(-2)));
  EXPECT_EQ(refl.alpha(-1), std::conj(base.alpha(-1)));
  SequenceTransform bad;
  bad.sign = 2;
  EXPECT_THROW(VerblunskySequence::transformed(base, bad), DomainError);
  SequenceTransform neg;
  neg.sign = -1;
  EXPECT_THROW(VerblunskySequence::transformed(make_constant(0.1), neg), SupportError);
}

TEST(Coeffs, CsvHasStableHeaderAndRows) {
  std::ostringstream os;
  write_coefficients_csv(os, make_constant(0.0), 0, 4);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,re_alpha,im_alpha,rho");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",1"), std::string::npos);
  }
  EXPECT_EQ(rows, 5);
}
