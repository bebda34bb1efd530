#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <string_view>

namespace rieff {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// A point (u1, u2) of the saturation triangle; u3 = 1 - u1 - u2 is implicit.
struct State {
  double u1 = 0.0;
  double u2 = 0.0;

  constexpr double u3() const { return 1.0 - u1 - u2; }
  Vec2 vec() const { return {u1, u2}; }
  static State from(const Vec2& v) { return {v.x(), v.y()}; }

  friend bool operator==(const State&, const State&) = default;
};

inline State operator+(const State& a, const Vec2& d) { return {a.u1 + d.x(), a.u2 + d.y()}; }
inline State operator-(const State& a, const Vec2& d) { return {a.u1 - d.x(), a.u2 - d.y()}; }
inline Vec2 operator-(const State& a, const State& b) { return {a.u1 - b.u1, a.u2 - b.u2}; }

inline double distance(const State& a, const State& b) { return (a - b).norm(); }

/// Flux triple (f1, f2, f3) with f3 = 1 - f1 - f2 for saturation models.
struct Flux {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;

  Vec2 vec() const { return {f1, f2}; }
};

enum class Family { slow, fast };
enum class Orientation { forward, backward };

constexpr std::string_view to_string(Family k) { return k == Family::slow ? "s" : "f"; }
constexpr std::string_view to_string(Orientation o) {
  return o == Orientation::forward ? "forward" : "backward";
}
constexpr Family other(Family k) { return k == Family::slow ? Family::fast : Family::slow; }

/// Central tolerance record shared by every module.
struct Tolerances {
  double eps_dom = 1e-12;    // saturation-triangle slack
  double eps_hyp = 1e-12;    // discriminant below -eps_hyp means complex speeds
  double eps_coinc = 1e-8;   // |lambda_f - lambda_s| below this flags near coincidence
  double h_nl = 1e-5;        // finite-difference step for grad(lambda) . r
  double eps_nl = 1e-8;      // |grad(lambda) . r| below this counts as an inflection
  double eps_rh = 1e-10;     // Rankine-Hugoniot residual accepted as on-locus
  double eps_eq = 1e-9;      // equality band for Lax and Liu comparisons
};

// Triangle membership and boundary helpers.

inline bool in_domain(const State& u, double eps) {
  return u.u1 >= -eps && u.u2 >= -eps && u.u1 + u.u2 <= 1.0 + eps;
}

/// Moves coordinates lying within eps of an edge exactly onto it.
inline State snap_to_domain(State u, double eps) {
  if (std::abs(u.u1) <= eps) u.u1 = 0.0;
  if (std::abs(u.u2) <= eps) u.u2 = 0.0;
  if (std::abs(u.u3()) <= eps) {
    if (u.u2 == 0.0)
      u.u1 = 1.0;
    else
      u.u2 = 1.0 - u.u1;
  }
  return u;
}

/// Signed slack of each triangle constraint: u1 >= 0, u2 >= 0, u3 >= 0.
inline std::array<double, 3> constraint_slack(const State& u) { return {u.u1, u.u2, u.u3()}; }

/// Gradient of each constraint's slack with respect to (u1, u2).
inline std::array<Vec2, 3> constraint_normals() {
  return {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{-1.0, -1.0}};
}

}  // namespace rieff
