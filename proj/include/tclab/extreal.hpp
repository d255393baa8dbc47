#pragma once

#include <compare>
#include <iosfwd>
#include <limits>
#include <string>

namespace tclab {

/// Extended real number on [-inf, +inf] with the arithmetic conventions
///   inf - inf = -inf + inf = -inf   and   0 * (+-inf) = 0.
///
/// The representation is a double that is never NaN. Finite overflow
/// saturates to the matching infinity, which IEEE arithmetic already does.
/// Comparisons are exact; tolerant comparison lives in `approx_*` helpers
/// and is the consumer's choice.
class ExtReal {
 public:
  constexpr ExtReal() noexcept = default;
  ExtReal(double v);  // NOLINT(google-explicit-constructor): throws on NaN

  static constexpr ExtReal pos_inf() noexcept { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal neg_inf() noexcept { return ExtReal(Raw{}, -std::numeric_limits<double>::infinity()); }

  constexpr double value() const noexcept { return v_; }
  constexpr bool is_finite() const noexcept { return v_ > -kInf && v_ < kInf; }
  constexpr bool is_pos_inf() const noexcept { return v_ == kInf; }
  constexpr bool is_neg_inf() const noexcept { return v_ == -kInf; }
  constexpr bool is_zero() const noexcept { return v_ == 0.0; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Raw {};
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr ExtReal(Raw, double v) noexcept : v_(v) {}

  double v_ = 0.0;
};

ExtReal add(ExtReal a, ExtReal b) noexcept;
ExtReal mul(ExtReal a, ExtReal b) noexcept;
ExtReal neg(ExtReal a) noexcept;

/// a + (-b) under the same conventions.
inline ExtReal sub(ExtReal a, ExtReal b) noexcept { return add(a, neg(b)); }

/// Quotient for a >= 0 numerators and b > 0 denominators (the only shape the
/// ratio measures need): inf/finite = inf, finite/inf = 0, inf/inf = inf.
ExtReal ratio_nonneg(ExtReal num, ExtReal den);

inline ExtReal positive_part(ExtReal a) noexcept { return a > ExtReal(0.0) ? a : ExtReal(0.0); }
inline ExtReal negative_part(ExtReal a) noexcept { return a < ExtReal(0.0) ? neg(a) : ExtReal(0.0); }

inline ExtReal min(ExtReal a, ExtReal b) noexcept { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }

/// Tolerance used by "a >= b" checks downstream: eps scaled by magnitude.
double tolerance_for(ExtReal a, ExtReal b, double eps) noexcept;

/// a >= b - tol. Infinite values compare exactly.
bool approx_ge(ExtReal a, ExtReal b, double eps) noexcept;
inline bool approx_le(ExtReal a, ExtReal b, double eps) noexcept { return approx_ge(b, a, eps); }
bool approx_eq(ExtReal a, ExtReal b, double eps) noexcept;

/// Signed shortfall of `a >= b`: positive when violated. Infinite gaps map to +inf.
double violation_margin(ExtReal a, ExtReal b) noexcept;

std::string to_string(ExtReal a);
std::ostream& operator<<(std::ostream& os, ExtReal a);

}  // namespace tclab
