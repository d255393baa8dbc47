#pragma once

#include <optional>
#include <string>

#include "tclab/errors.hpp"
#include "tclab/prob_space.hpp"

namespace support {

template <class F>
std::optional<tclab::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const tclab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const tclab::Error& e) {
    return e.what();
  }
  return {};
}

inline bool same(const tclab::RandomVariable& a, const tclab::RandomVariable& b, double eps = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t w = 0; w < a.size(); ++w)
    if (!tclab::approx_eq(a[w], b[w], eps)) return false;
  return true;
}

inline std::string show(const tclab::RandomVariable& x) {
  std::string s = "(";
  for (std::size_t w = 0; w < x.size(); ++w) s += (w ? "," : "") + tclab::to_string(x[w]);
  return s + ")";
}

}  // namespace support

#define CHECK_CODE(expr, code) CHECK(support::error_code([&] { (void)(expr); }) == (code))
