#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "cmv/types.hpp"

namespace cmv {

enum class Support { one_sided, two_sided };

enum class SequenceKind { constant, sturmian, explicit_list, two_sided_composite, transformed };

/// Index/value transform applied on top of a base sequence:
/// alpha'(n) = scale * op(base(sign * n + offset)), op = conj when `conjugate`.
struct SequenceTransform {
  cplx scale{1.0, 0.0};
  bool conjugate = false;
  long sign = 1;
  long offset = 0;
  Support support = Support::one_sided;
};

/// Immutable map n -> alpha(n) in the open unit disk.
///
/// One-sided sequences are defined for n >= 0, two-sided ones on all of Z.
/// Copies share the underlying storage, so passing by value is cheap and
/// concurrent reads are safe.
class VerblunskySequence {
 public:
  [[nodiscard]] cplx alpha(long n) const;
  [[nodiscard]] double rho(long n) const;

  [[nodiscard]] Support support() const noexcept;
  [[nodiscard]] SequenceKind kind() const noexcept;
  [[nodiscard]] bool defined_at(long n) const noexcept;

  /// Values alpha(first), ..., alpha(first + count - 1).
  [[nodiscard]] std::vector<cplx> values(long first, long count) const;

  /// lambda * alpha(n); |lambda| must be 1 to stay inside the disk.
  [[nodiscard]] VerblunskySequence rotated(cplx lambda) const;

  /// One-sided view n -> alpha(n + k).
  [[nodiscard]] VerblunskySequence shifted(long k) const;

  [[nodiscard]] static VerblunskySequence transformed(const VerblunskySequence& base,
                                                      const SequenceTransform& t);

  /// Storage node; its definition is private to the implementation.
  struct Node;
  [[nodiscard]] static VerblunskySequence from_node(std::shared_ptr<const Node> node);

 private:
  explicit VerblunskySequence(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

VerblunskySequence make_constant(cplx a, Support support = Support::one_sided);

/// alpha(n) = v(n) alpha + (1 - v(n)) beta with v(n) = floor((n+1) omega) - floor(n omega).
/// The golden-mean frequency is evaluated with exact integer arithmetic.
VerblunskySequence make_sturmian(cplx alpha, cplx beta, double omega,
                                 Support support = Support::one_sided);

/// Stored values at first .. first + size - 1, zero elsewhere in the support.
VerblunskySequence make_explicit(std::vector<cplx> values, long first = 0,
                                 Support support = Support::one_sided);

/// alpha(n) = positive(n) for n >= 0 and negative(-1 - n) for n <= -1.
VerblunskySequence extend_two_sided(const VerblunskySequence& positive,
                                    const VerblunskySequence& negative);

/// Two-sided sequence with a one-sided right half and a constant left filler.
VerblunskySequence with_left_filler(const VerblunskySequence& positive, cplx filler = {});

/// floor(k * omega); exact for the golden mean, long double otherwise.
long floor_multiple(double omega, long k);

/// Sturmian indicator v(n) in {0, 1}.
int sturmian_indicator(double omega, long n);

[[nodiscard]] bool is_golden_frequency(double omega) noexcept;

/// CSV with header n,re_alpha,im_alpha,rho for n in [n_lo, n_hi].
void write_coefficients_csv(std::ostream& os, const VerblunskySequence& seq, long n_lo,
                            long n_hi);

}  // namespace cmv
