#pragma once

#include "rieff/eff.hpp"
#include "rieff/scalar_hull.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace rieff {

struct Wave {
  PieceKind kind = PieceKind::shock;
  Family family = Family::slow;
  State left, right;
  double ell_left = 0.0, ell_right = 0.0;
  double speed_left = 0.0, speed_right = 0.0;  // equal for shocks
  std::shared_ptr<const EffectiveFlux> eff;    // flux of the group, for rarefaction inversion
};

struct WaveCurveOptions {
  EffOptions eff;
  std::optional<ParamCoordinate> coord;  // default: first monotone candidate
};

/// All wave groups of one family leaving (forward) or reaching (backward) U0.
/// Each branch is one direction from U0 with its own effective flux.
struct WaveCurve {
  State origin;
  Family family = Family::slow;
  Orientation orientation = Orientation::forward;
  std::vector<std::shared_ptr<const EffectiveFlux>> branches;

  std::vector<State> samples() const;
};

WaveCurve wave_curve(const FluxModel& model, const State& u0, Family family,
                     Orientation orientation, const WaveCurveOptions& opts = {},
                     const Tolerances& tol = {});

/// Coordinate used for a wave group: u3, u1, u2, then directions in steps of
/// 7.5 degrees. When none is monotone over the whole group, the group is cut
/// to the longest monotone prefix.
ParamCoordinate choose_coordinate(WaveGroup& group);

struct CurveLocation {
  std::size_t branch = 0;
  double ell = 0.0;
  State state;
  double distance = 0.0;
};

std::optional<CurveLocation> locate_on_curve(const WaveCurve& curve, const State& u,
                                             double tol = 1e-9);

/// Waves of the group joining the origin to the state at `ell` on `branch`,
/// ordered left to right.
std::vector<Wave> wave_group(const WaveCurve& curve, std::size_t branch, double ell);

struct RiemannSolution {
  State left, middle, right;
  std::vector<Wave> slow_group, fast_group;
  bool valid = true;
  bool multiple = false;
  std::vector<State> candidates;  // every intersection found
};

RiemannSolution solve_riemann(const FluxModel& model, const State& ul, const State& ur,
                              const WaveCurveOptions& opts = {}, const Tolerances& tol = {});

/// U(xi) for each xi; shocks take the left limit.
std::vector<State> sample_profile(const RiemannSolution& sol, const std::vector<double>& xi);

}  // namespace rieff
