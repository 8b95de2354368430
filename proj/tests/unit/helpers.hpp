#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <doctest.h>

#include "hgeo/error.hpp"
#include "hgeo/models.hpp"

namespace testing {

inline hgeo::ParametricModel lz(double x = 1.0) { return hgeo::build_model("landau_zener", {{"x", x}}); }

inline hgeo::ParametricModel shuttling() {
  return hgeo::build_model("shuttling", {{"t_c", 1.0},
                                         {"Delta_L", 1.0},
                                         {"Delta_R", 2.0},
                                         {"phi_L", 0.0},
                                         {"phi_R", 0.8 * std::numbers::pi}});
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// name of the hgeo::Error thrown by f, or "" when nothing was thrown
template <class F>
std::string error_name(F&& f) {
  try {
    f();
  } catch (const hgeo::Error& e) {
    return e.name();
  }
  return "";
}

}  // namespace testing
