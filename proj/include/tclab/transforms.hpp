#pragma once

#include <functional>
#include <string>

#include "tclab/extreal.hpp"

namespace tclab {

/// Strictly increasing map on [-inf, inf] together with its inverse.
class MonotoneTransform {
 public:
  using Map = std::function<ExtReal(ExtReal)>;

  /// Probes the pair on a fixed grid and throws NonInvertibleTransform if the
  /// forward map is not strictly increasing or the inverse does not undo it.
  MonotoneTransform(std::string name, Map forward, Map inverse);

  static MonotoneTransform identity();
  /// x -> c x for c > 0.
  static MonotoneTransform scale(double c);
  static MonotoneTransform cube();
  /// Bounded bijection onto [-pi/2, pi/2]; the inverse saturates outside the range.
  static MonotoneTransform arctan();

  const std::string& name() const noexcept { return name_; }
  ExtReal apply(ExtReal x) const { return forward_(x); }
  ExtReal invert(ExtReal y) const { return inverse_(y); }

 private:
  std::string name_;
  Map forward_;
  Map inverse_;
};

}  // namespace tclab
