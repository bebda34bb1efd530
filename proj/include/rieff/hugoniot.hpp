#pragma once

#include "rieff/flux_model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rieff {

/// Step control for pseudo-arclength continuation of Rankine-Hugoniot loci.
struct ContinuationOptions {
  double first_step = 1e-3;  // radius of the start-direction scan around R
  double min_step = 1e-5;
  double max_step = 1e-2;
  int max_steps = 20000;
  double max_length = 10.0;
  int max_newton = 12;
  double newton_tol = 1e-13;
  double max_turn = 0.2;  // radians of tangent rotation accepted per step
  int scan_samples = 720;
};

enum class LaxTag {
  slow_shock,
  fast_shock,
  overcompressive,
  undercompressive,
  characteristic_left,
  characteristic_right
};

std::string_view to_string(LaxTag t);

struct LaxClass {
  LaxTag tag = LaxTag::undercompressive;
  std::optional<Family> family;  // set for the characteristic (equality) cases
};

/// A corrected point of H(R) with its continuation tangent.
struct LocusPoint {
  State state;
  double sigma = 0.0;
  Vec2 tangent{1.0, 0.0};  // unit, state space
  double dsigma_ds = 0.0;  // derivative of sigma per unit state-space arclength
};

/// One connected arc of H(R), ordered away from its first point.
struct HugoniotBranch {
  enum class Stop { boundary, max_steps, max_length, closed_loop, step_underflow };

  State reference;
  Vec2 start_direction{1.0, 0.0};
  std::optional<Family> start_family;  // eigen-family the branch leaves R along
  std::vector<State> points;
  std::vector<double> sigmas;
  std::vector<Vec2> tangents;
  std::vector<double> dsigma_ds;
  std::vector<double> arclength;
  std::vector<LaxClass> lax_classes;  // forward orientation unless reclassified
  Stop stop = Stop::max_steps;

  std::size_t size() const { return points.size(); }
  LocusPoint at(std::size_t i) const { return {points[i], sigmas[i], tangents[i], dsigma_ds[i]}; }
  void push_back(const LocusPoint& p);
};

std::string_view to_string(HugoniotBranch::Stop s);

struct ShockSpeed {
  double sigma = 0.0;
  double residual = 0.0;  // |dF - sigma dU|
};

/// Least-squares combination of both jump relations; throws CoincidentStates.
ShockSpeed shock_speed(const FluxModel& model, const State& ref, const State& u);

/// A start point on the circle of radius first_step around R.
struct HugoniotStart {
  State point;
  Vec2 direction;
  std::optional<Family> family;
};

/// Directions in which H(R) leaves R, found as zeros of (F(U)-F(R)) x (U-R)
/// on a small circle restricted to the triangle. Works at degenerate R.
std::vector<HugoniotStart> hugoniot_starts(const FluxModel& model, const State& ref,
                                           const ContinuationOptions& opts = {},
                                           const Tolerances& tol = {});

HugoniotBranch trace_branch(const FluxModel& model, const State& ref, const HugoniotStart& start,
                            const ContinuationOptions& opts = {}, const Tolerances& tol = {});

/// All local branches of H(R) through R.
std::vector<HugoniotBranch> trace_hugoniot(const FluxModel& model, const State& ref,
                                           const ContinuationOptions& opts = {},
                                           const Tolerances& tol = {});

/// Continues H(R) from a point `from` already on the locus, leaving along
/// `direction`. The returned branch starts at `from`.
HugoniotBranch continue_hugoniot(const FluxModel& model, const State& ref, const State& from,
                                 const Vec2& direction, const ContinuationOptions& opts = {},
                                 const Tolerances& tol = {});

/// Locus point on the hyperplane tangent_i . (U - U_i) = tau, corrected from
/// sample i. Used to refine events between samples.
std::optional<LocusPoint> locus_point_at(const FluxModel& model, const HugoniotBranch& branch,
                                         std::size_t i, double tau,
                                         const ContinuationOptions& opts = {});

/// Keeps points [0, i] and appends p.
HugoniotBranch truncate_branch(const HugoniotBranch& branch, std::size_t i, const LocusPoint& p);

LaxClass lax_classify(const FluxModel& model, const State& ref, const State& u, double sigma,
                      Orientation orientation, const Tolerances& tol = {});

void classify_branch(const FluxModel& model, HugoniotBranch& branch, Orientation orientation,
                     const Tolerances& tol = {});

/// Maximal initial arc obeying Liu's E-condition relative to R.
HugoniotBranch liu_trim(const FluxModel& model, const HugoniotBranch& branch,
                        Orientation orientation, const ContinuationOptions& opts = {},
                        const Tolerances& tol = {});

struct BetheWendroffPoint {
  LocusPoint point;
  Family family = Family::slow;  // k' with sigma(R, U*) = lambda_k'(U*)
  double lambda = 0.0;
  double arclength = 0.0;
  std::size_t segment = 0;      // root lies between points[segment] and points[segment+1]
  double tangent_angle = 0.0;   // angle between locus tangent and r_k'
};

/// Roots of sigma(R, .) - lambda_k(.) along the branch where the locus is
/// tangent to r_k (angle <= max_angle). Crossings without tangency are
/// secondary bifurcations of H(R) and are not reported.
std::vector<BetheWendroffPoint> find_bethe_wendroff(const FluxModel& model,
                                                    const HugoniotBranch& branch,
                                                    const ContinuationOptions& opts = {},
                                                    const Tolerances& tol = {},
                                                    double max_angle = 1e-2);

}  // namespace rieff
