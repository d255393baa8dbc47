#include "tclab/extreal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tclab/errors.hpp"

namespace tclab {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v)) throw Error(ErrorCode::InvalidArgument, "NaN is not an extended real");
}

ExtReal add(ExtReal a, ExtReal b) noexcept {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

ExtReal mul(ExtReal a, ExtReal b) noexcept {
  if (a.is_zero() || b.is_zero()) return ExtReal(0.0);
  // Neither factor is zero, so IEEE sign rules give the right infinity.
  return ExtReal(a.value() * b.value());
}

ExtReal neg(ExtReal a) noexcept { return ExtReal(-a.value()); }

ExtReal ratio_nonneg(ExtReal num, ExtReal den) {
  if (num < ExtReal(0.0) || !(den > ExtReal(0.0)))
    throw Error(ErrorCode::InvalidArgument, "ratio_nonneg needs num >= 0 and den > 0");
  if (num.is_pos_inf()) return ExtReal::pos_inf();
  if (den.is_pos_inf()) return ExtReal(0.0);
  return ExtReal(num.value() / den.value());
}

double tolerance_for(ExtReal a, ExtReal b, double eps) noexcept {
  double scale = 1.0;
  if (a.is_finite()) scale = std::max(scale, std::fabs(a.value()));
  if (b.is_finite()) scale = std::max(scale, std::fabs(b.value()));
  return eps * scale;
}

bool approx_ge(ExtReal a, ExtReal b, double eps) noexcept {
  if (a >= b) return true;
  if (!a.is_finite() || !b.is_finite()) return false;
  return a.value() >= b.value() - tolerance_for(a, b, eps);
}

bool approx_eq(ExtReal a, ExtReal b, double eps) noexcept { return approx_ge(a, b, eps) && approx_ge(b, a, eps); }

double violation_margin(ExtReal a, ExtReal b) noexcept {
  if (a >= b) return 0.0;
  if (!a.is_finite() || !b.is_finite()) return std::numeric_limits<double>::infinity();
  return b.value() - a.value();
}

std::string to_string(ExtReal a) {
  if (a.is_pos_inf()) return "inf";
  if (a.is_neg_inf()) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << a.value();
  return os.str();
}

std::ostream& operator<<(std::ostream& os, ExtReal a) { return os << to_string(a); }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRefiningFiltration: return "NonRefiningFiltration";
    case ErrorCode::NontrivialRoot: return "NontrivialRoot";
    case ErrorCode::BadProbabilities: return "BadProbabilities";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::NotMeasurable: return "NotMeasurable";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::BadX: return "BadX";
    case ErrorCode::NotOneStep: return "NotOneStep";
    case ErrorCode::TimeOrder: return "TimeOrder";
    case ErrorCode::NonInvertibleTransform: return "NonInvertibleTransform";
    case ErrorCode::EmptyBenchmark: return "EmptyBenchmark";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::EquivalenceBroken: return "EquivalenceBroken";
    case ErrorCode::NotProjective: return "NotProjective";
    case ErrorCode::NotDecreasingFamily: return "NotDecreasingFamily";
    case ErrorCode::NotTranslationInvariant: return "NotTranslationInvariant";
    case ErrorCode::BracketExhausted: return "BracketExhausted";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::AdaptednessError: return "AdaptednessError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace tclab
