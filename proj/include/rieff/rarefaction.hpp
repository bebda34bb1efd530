#pragma once

#include "rieff/flux_model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rieff {

struct RarefactionOptions {
  double step = 1e-3;       // RK4 step in arclength
  double max_length = 5.0;
  double nl_tol = 1e-9;     // |d lambda / ds| accepted at a refined inflection
};

/// Integral curve of an eigenvector field, ordered in the direction of motion.
/// The followed eigenpair is tracked by continuity, so `families` may change
/// when the curve passes an umbilic point.
struct RarefactionSegment {
  enum class Stop { inflection, boundary, hyperbolicity_loss, max_length };

  Family family = Family::slow;  // family at the first point
  Orientation direction = Orientation::forward;  // forward: lambda increasing
  std::vector<State> points;
  std::vector<double> lambdas;
  std::vector<Vec2> tangents;  // unit, along the motion
  std::vector<double> arclength;
  std::vector<Family> families;
  Stop stop_reason = Stop::max_length;
  bool start_at_inflection = false;

  std::size_t size() const { return points.size(); }
};

std::string_view to_string(RarefactionSegment::Stop s);

/// RK4 on the unit eigenvector field starting at U0. With `initial_direction`
/// the eigenvector best aligned with it is followed (needed where the two
/// fields coincide); otherwise r_k(U0) is used with its sign chosen so that
/// lambda moves according to `direction`. A start on the inflection manifold,
/// or a hint pointing the wrong way, gives a one-point segment with
/// start_at_inflection set.
RarefactionSegment integrate_rarefaction(const FluxModel& model, const State& u0, Family family,
                                         Orientation direction,
                                         const RarefactionOptions& opts = {},
                                         const Tolerances& tol = {},
                                         std::optional<Vec2> initial_direction = std::nullopt);

/// The refined inflection state closing the segment.
State find_inflection(const FluxModel& model, const RarefactionSegment& segment,
                      const Tolerances& tol = {});

}  // namespace rieff
