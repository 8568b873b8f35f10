#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cmv/coeffs.hpp"
#include "cmv/errors.hpp"
#include "cmv/operator.hpp"
#include "support/oracles.hpp"

using namespace cmv;

namespace {

VerblunskySequence random_two_sided(std::uint64_t seed, double radius, long half = 40) {
  std::mt19937_64 rng(seed);
  std::vector<cplx> v(static_cast<std::size_t>(2 * half + 1));
  for (auto& a : v) a = oracle::random_in_disk(rng, radius);
  return make_explicit(v, -half, Support::two_sided);
}

State random_state(std::uint64_t seed, long first, std::size_t n) {
  std::mt19937_64 rng(seed);
  State s;
  s.first = first;
  s.amp.resize(n);
  for (auto& a : s.amp) a = oracle::random_in_disk(rng, 1.0);
  return s;
}

}  // namespace

TEST(Operator, FiniteMatchesDenseProduct) {
  std::mt19937_64 rng(3);
  std::vector<cplx> v(29);
  for (auto& a : v) a = oracle::random_in_disk(rng, 0.95);
  const auto seq = make_explicit(v);
  const cplx eta = std::polar(1.0, 0.4);
  const FiniteCMV C = build_finite_cmv(seq, 30, eta);
  const auto D = oracle::cmv_dense(
      [&](long p) { return p == -1 ? cplx{-1.0} : (p == 29 ? eta : seq.alpha(p)); }, 0, 29);
  for (long i = 0; i < 30; ++i) {
    for (long j = 0; j < 30; ++j) {
      EXPECT_NEAR(std::abs(C.band.at(i, j) - D(static_cast<std::size_t>(i), static_cast<std::size_t>(j))), 0.0, 1e-15);
    }
  }
}

TEST(Operator, FiniteIsUnitaryForRandomSeeds) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::mt19937_64 rng(s);
    std::vector<cplx> v(49);
    for (auto& a : v) a = oracle::random_in_disk(rng, 0.99);
    const auto [d1, d2] = build_finite_cmv(make_explicit(v), 50).band.unitarity_defect();
    EXPECT_LT(std::max(d1, d2), 1e-12);
  }
}

TEST(Operator, FiniteRejectsBadInput) {
  EXPECT_THROW(build_finite_cmv(make_constant(0.1), 1), SizeError);
  EXPECT_THROW(build_finite_cmv(make_constant(0.1), 10, 0.5), ModulusError);
}

TEST(Operator, ExtendedWindowMatchesDense) {
  const auto seq = random_two_sided(11, 0.9);
  const cplx eta = std::polar(1.0, -1.1);
  const auto W = build_extended_window(seq, -9, 10, eta).band;
  const auto D = oracle::cmv_dense(
      [&](long p) { return (p == -10 || p == 10) ? eta : seq.alpha(p); }, -9, 10);
  for (long i = -9; i <= 10; ++i) {
    for (long j = -9; j <= 10; ++j) {
      EXPECT_NEAR(std::abs(W.at(i, j) - D(static_cast<std::size_t>(i + 9), static_cast<std::size_t>(j + 9))), 0.0, 1e-15);
    }
  }
  const auto [d1, d2] = W.unitarity_defect();
  EXPECT_LT(std::max(d1, d2), 1e-13);
}

TEST(Operator, ActionMatchesWindowInterior) {
  const auto seq = random_two_sided(5, 0.8);
  const State v = random_state(6, -6, 13);
  const State Ev = apply_extended(seq, v);
  const auto W = build_extended_window(seq, -20, 20).band;
  for (long x = -18; x <= 18; ++x) {
    cplx s{};
    for (long y = v.first; y <= v.last(); ++y) s += W.at(x, y) * v.at(y);
    EXPECT_NEAR(std::abs(Ev.at(x) - s), 0.0, 1e-14) << x;
  }
}

TEST(Operator, AdjointInvertsAndTransposeMatchesEntries) {
  const auto seq = random_two_sided(8, 0.9);
  const State v = random_state(9, -5, 11);
  EXPECT_LT(max_abs_diff(apply_extended_adjoint(seq, apply_extended(seq, v)), v), 1e-14);
  EXPECT_LT(max_abs_diff(apply_extended(seq, apply_extended_adjoint(seq, v)), v), 1e-14);
  for (long y = -4; y <= 4; ++y) {
    const State row = apply_extended_transpose(seq, State::delta(y));
    for (long x = -7; x <= 7; ++x) {
      EXPECT_NEAR(std::abs(row.at(x) - apply_extended(seq, State::delta(x)).at(y)), 0.0, 1e-15);
    }
  }
}

TEST(Operator, NormPreservedOnRandomStates) {
  const auto seq = random_two_sided(21, 0.95);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const State v = random_state(s, -10, 21);
    EXPECT_NEAR(apply_extended(seq, v).norm(), v.norm(), 1e-13 * v.norm());
  }
}

TEST(Operator, SplitAtOriginReflectsLeftHalf) {
  const auto seq = random_two_sided(12, 0.9);
  const auto [right, left] = split_at_origin(seq);
  for (long k = 0; k < 30; ++k) {
    EXPECT_EQ(right.alpha(k), seq.alpha(k));
    EXPECT_EQ(left.alpha(k), std::conj(seq.alpha(-2 - k)));
  }
  EXPECT_THROW(split_at_origin(make_constant(0.1)), SupportError);
}

TEST(Operator, DecoupledBandSplitsHalfLines) {
  const auto seq = random_two_sided(13, 0.9);
  const auto B = decoupled_band(seq, -10, 10);
  for (long x = -10; x <= 10; ++x) {
    for (long y = -10; y <= 10; ++y) {
      if ((x < 0) != (y < 0)) {
        EXPECT_EQ(B.at(x, y), cplx{}) << x << "," << y;
      }
    }
  }
}

TEST(Operator, ResolventOracleMatchesGaussianElimination) {
  const auto seq = random_two_sided(14, 0.8);
  const cplx z{0.3, 0.6};
  const long hw = 16;
  const ResolventOracle R(seq, z, hw);
  auto D = oracle::cmv_dense([&](long p) { return (p == -hw - 1 || p == hw) ? cplx{1.0} : seq.alpha(p); },
                             -hw, hw);
  for (std::size_t i = 0; i < D.n; ++i) D(i, i) -= z;
  for (long y = -4; y <= 4; ++y) {
    std::vector<cplx> e(D.n);
    e[static_cast<std::size_t>(y + hw)] = 1.0;
    const auto col = oracle::solve(D, e);
    for (long x = -4; x <= 4; ++x) {
      EXPECT_NEAR(std::abs(R.entry(x, y) - col[static_cast<std::size_t>(x + hw)]), 0.0, 1e-12);
    }
  }
  EXPECT_LT(R.residual(), 1e-12);
  EXPECT_THROW((void)R.entry(hw, 0), WindowError);
  EXPECT_THROW(ResolventOracle(seq, 0.0, hw), DomainError);
  EXPECT_THROW(ResolventOracle(make_constant(0.1), z, hw), SupportError);
}

TEST(Operator, SpectralBasisReachOnRandomSequences) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto seq = random_two_sided(100 + s, 0.9);
    for (long n : {-2L, 0L, 3L}) EXPECT_LT(spectral_basis_reach(seq, n).max_residual(), 1e-10);
  }
  EXPECT_THROW(spectral_basis_reach(make_constant(0.2), 0), SupportError);
}

TEST(Operator, FreeWalkMovesTwoSitesPerStep) {
  const auto seq = make_constant(0.0, Support::two_sided);
  const State s0 = State::delta(0);
  EXPECT_LT(max_abs_diff(evolve_walk(seq, s0, 0), s0), 1e-16);
  EXPECT_NEAR(std::abs(evolve_walk(seq, s0, 1).at(-2)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(evolve_walk(seq, State::delta(1), 3).at(7)), 1.0, 1e-15);
}

TEST(Operator, WalkMatchesRepeatedAction) {
  const auto seq = make_sturmian(0.5, -0.5, kGoldenFrequency, Support::two_sided);
  State direct = State::delta(0);
  for (int k = 0; k < 50; ++k) direct = apply_extended(seq, direct);
  const State walked = evolve_walk(seq, State::delta(0), 50);
  EXPECT_LT(max_abs_diff(direct, walked), 1e-13);
  EXPECT_NEAR(walked.norm(), 1.0, 1e-13);
}

TEST(Operator, CsvHeaders) {
  std::ostringstream a, b;
  write_band_csv(a, build_finite_cmv(make_constant(0.2), 4).band);
  write_state_csv(b, State::delta(0));
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "row,col,re,im");
  EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "n,re,im,abs2");
}
