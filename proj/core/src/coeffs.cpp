#include "cmv/coeffs.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>
#include <variant>

#include "cmv/errors.hpp"

namespace cmv {

namespace {

struct ConstantData {
  cplx value;
};

struct SturmianData {
  cplx alpha;
  cplx beta;
  double omega;
};

struct ExplicitData {
  std::vector<cplx> values;
  long first;
};

struct CompositeData {
  VerblunskySequence positive;
  VerblunskySequence negative;
};

struct TransformedData {
  VerblunskySequence base;
  SequenceTransform transform;
};

void check_in_disk(cplx a, const char* what) {
  if (!(std::abs(a) < 1.0)) {
    std::ostringstream msg;
    msg << what << ": |" << a << "| = " << std::abs(a) << " is not inside the unit disk";
    throw ModulusError(msg.str());
  }
}

__extension__ using u128 = unsigned __int128;

// floor(sqrt(n)) for n >= 0.
std::int64_t isqrt(u128 n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * static_cast<u128>(r) > n) {
    --r;
  }
  while (static_cast<u128>(r + 1) * static_cast<u128>(r + 1) <= n) {
    ++r;
  }
  return r;
}

std::int64_t floor_div2(std::int64_t v) { return (v >= 0) ? v / 2 : -((-v + 1) / 2); }

// floor(k (sqrt5 - 1) / 2) for k >= 0, using k sqrt5 irrational for k != 0.
std::int64_t floor_golden_nonneg(std::int64_t k) {
  if (k == 0) return 0;
  const auto kk = static_cast<u128>(k);
  const std::int64_t s = isqrt(5 * kk * kk);
  return floor_div2(s - k);
}

}  // namespace

struct VerblunskySequence::Node {
  SequenceKind kind;
  Support support;
  std::variant<ConstantData, SturmianData, ExplicitData, CompositeData, TransformedData> data;
};

VerblunskySequence::VerblunskySequence(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

VerblunskySequence VerblunskySequence::from_node(std::shared_ptr<const Node> node) {
  return VerblunskySequence(std::move(node));
}

Support VerblunskySequence::support() const noexcept { return node_->support; }
SequenceKind VerblunskySequence::kind() const noexcept { return node_->kind; }

bool VerblunskySequence::defined_at(long n) const noexcept {
  return node_->support == Support::two_sided || n >= 0;
}

cplx VerblunskySequence::alpha(long n) const {
  if (!defined_at(n)) {
    throw SupportError("alpha(" + std::to_string(n) + ") queried on a one-sided sequence");
  }
  return std::visit(
      [n](const auto& d) -> cplx {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantData>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, SturmianData>) {
          return sturmian_indicator(d.omega, n) ? d.alpha : d.beta;
        } else if constexpr (std::is_same_v<T, ExplicitData>) {
          const long i = n - d.first;
          if (i < 0 || i >= static_cast<long>(d.values.size())) return {};
          return d.values[static_cast<std::size_t>(i)];
        } else if constexpr (std::is_same_v<T, CompositeData>) {
          return n >= 0 ? d.positive.alpha(n) : d.negative.alpha(-1 - n);
        } else {
          const auto& t = d.transform;
          cplx a = d.base.alpha(t.sign * n + t.offset);
          if (t.conjugate) a = std::conj(a);
          return t.scale * a;
        }
      },
      node_->data);
}

double VerblunskySequence::rho(long n) const {
  const double m = std::norm(alpha(n));
  return std::sqrt(1.0 - m);
}

std::vector<cplx> VerblunskySequence::values(long first, long count) const {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long i = 0; i < count; ++i) out.push_back(alpha(first + i));
  return out;
}

VerblunskySequence VerblunskySequence::rotated(cplx lambda) const {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) {
    throw ModulusError("rotation factor must be unimodular");
  }
  SequenceTransform t;
  t.scale = lambda / std::abs(lambda);
  t.support = support();
  return transformed(*this, t);
}

VerblunskySequence VerblunskySequence::shifted(long k) const {
  SequenceTransform t;
  t.offset = k;
  t.support = Support::one_sided;
  if (support() == Support::one_sided && k < 0) {
    throw SupportError("shift would read negative indices of a one-sided sequence");
  }
  return transformed(*this, t);
}

VerblunskySequence VerblunskySequence::transformed(const VerblunskySequence& base,
                                                   const SequenceTransform& t) {
  if (t.sign != 1 && t.sign != -1) throw DomainError("transform sign must be +1 or -1");
  if (std::abs(t.scale) > 1.0 + 1e-12) throw ModulusError("transform scale leaves the disk");
  // On a one-sided base every index of the new support must map into n >= 0.
  if (base.support() == Support::one_sided &&
      (t.support == Support::two_sided || t.sign != 1 || t.offset < 0)) {
    throw SupportError("transform reads outside the support of a one-sided base");
  }
  auto node = std::make_shared<Node>(
      Node{SequenceKind::transformed, t.support, TransformedData{base, t}});
  return VerblunskySequence(std::move(node));
}

VerblunskySequence make_constant(cplx a, Support support) {
  check_in_disk(a, "make_constant");
  auto node = std::make_shared<VerblunskySequence::Node>(
      VerblunskySequence::Node{SequenceKind::constant, support, ConstantData{a}});
  return VerblunskySequence::from_node(std::move(node));
}

VerblunskySequence make_sturmian(cplx alpha, cplx beta, double omega, Support support) {
  check_in_disk(alpha, "make_sturmian alpha");
  check_in_disk(beta, "make_sturmian beta");
  if (!(omega > 0.0 && omega < 1.0)) {
    throw FrequencyRangeError("Sturmian frequency must lie in (0, 1)");
  }
  auto node = std::make_shared<VerblunskySequence::Node>(VerblunskySequence::Node{
      SequenceKind::sturmian, support, SturmianData{alpha, beta, omega}});
  return VerblunskySequence::from_node(std::move(node));
}

VerblunskySequence make_explicit(std::vector<cplx> values, long first, Support support) {
  for (const cplx& a : values) check_in_disk(a, "make_explicit");
  if (support == Support::one_sided && first < 0) {
    throw SupportError("explicit one-sided list cannot start at a negative index");
  }
  auto node = std::make_shared<VerblunskySequence::Node>(VerblunskySequence::Node{
      SequenceKind::explicit_list, support, ExplicitData{std::move(values), first}});
  return VerblunskySequence::from_node(std::move(node));
}

VerblunskySequence extend_two_sided(const VerblunskySequence& positive,
                                    const VerblunskySequence& negative) {
  if (positive.support() != Support::one_sided || negative.support() != Support::one_sided) {
    throw SupportError("extend_two_sided expects two one-sided halves");
  }
  auto node = std::make_shared<VerblunskySequence::Node>(VerblunskySequence::Node{
      SequenceKind::two_sided_composite, Support::two_sided, CompositeData{positive, negative}});
  return VerblunskySequence::from_node(std::move(node));
}

VerblunskySequence with_left_filler(const VerblunskySequence& positive, cplx filler) {
  return extend_two_sided(positive, make_constant(filler, Support::one_sided));
}

bool is_golden_frequency(double omega) noexcept {
  return std::abs(omega - kGoldenFrequency) < 1e-15;
}

long floor_multiple(double omega, long k) {
  if (is_golden_frequency(omega)) {
    if (k >= 0) return floor_golden_nonneg(k);
    return -floor_golden_nonneg(-k) - 1;
  }
  return static_cast<long>(std::floor(static_cast<long double>(k) * omega));
}

int sturmian_indicator(double omega, long n) {
  return static_cast<int>(floor_multiple(omega, n + 1) - floor_multiple(omega, n));
}

void write_coefficients_csv(std::ostream& os, const VerblunskySequence& seq, long n_lo,
                            long n_hi) {
  const auto old_precision = os.precision(17);
  os << "n,re_alpha,im_alpha,rho\n";
  for (long n = n_lo; n <= n_hi; ++n) {
    const cplx a = seq.alpha(n);
    os << n << ',' << a.real() << ',' << a.imag() << ',' << seq.rho(n) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace cmv
