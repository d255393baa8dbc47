#include "tclab/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tclab/errors.hpp"

namespace tclab {

MonotoneTransform::MonotoneTransform(std::string name, Map forward, Map inverse)
    : name_(std::move(name)), forward_(std::move(forward)), inverse_(std::move(inverse)) {
  static const std::array<double, 15> kProbe = {-HUGE_VAL, -1e6, -100.0, -10.0, -1.0, -0.5, -1e-3, 0.0,
                                                1e-3,      0.5,  1.0,    10.0,  100.0, 1e6, HUGE_VAL};
  ExtReal previous = ExtReal::neg_inf();
  for (std::size_t i = 0; i < kProbe.size(); ++i) {
    const ExtReal x(kProbe[i]);
    const ExtReal y = forward_(x);
    if (i > 0 && !(y > previous))
      throw Error(ErrorCode::NonInvertibleTransform, name_ + " is not strictly increasing at " + to_string(x));
    previous = y;
    const ExtReal back = inverse_(y);
    const bool ok = x.is_finite() ? (back.is_finite() && std::fabs(back.value() - x.value()) <=
                                                            1e-6 * std::max(1.0, std::fabs(x.value())))
                                  : back == x;
    if (!ok)
      throw Error(ErrorCode::NonInvertibleTransform, name_ + " inverse fails to undo the map at " + to_string(x));
  }
}

MonotoneTransform MonotoneTransform::identity() {
  return {"identity", [](ExtReal x) { return x; }, [](ExtReal y) { return y; }};
}

MonotoneTransform MonotoneTransform::scale(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::NonInvertibleTransform, "scale factor must be finite and positive");
  return {"scale:" + to_string(ExtReal(c)), [c](ExtReal x) { return mul(ExtReal(c), x); },
          [c](ExtReal y) { return mul(ExtReal(1.0 / c), y); }};
}

MonotoneTransform MonotoneTransform::cube() {
  return {"cube", [](ExtReal x) { return ExtReal(x.value() * x.value() * x.value()); },
          [](ExtReal y) { return ExtReal(std::cbrt(y.value())); }};
}

MonotoneTransform MonotoneTransform::arctan() {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  return {"arctan", [](ExtReal x) { return ExtReal(std::atan(x.value())); },
          [](ExtReal y) {
            if (y.value() >= kHalfPi) return ExtReal::pos_inf();
            if (y.value() <= -kHalfPi) return ExtReal::neg_inf();
            return ExtReal(std::tan(y.value()));
          }};
}

}  // namespace tclab
