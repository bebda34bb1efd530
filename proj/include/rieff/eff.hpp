#pragma once

#include "rieff/hugoniot.hpp"
#include "rieff/rarefaction.hpp"
#include "rieff/sampled_flux.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rieff {

/// Affine coordinate l(U) = alpha0 + alpha1 u1 + alpha2 u2 along a base curve.
/// The same weights applied to the fluxes give phi(F).
struct ParamCoordinate {
  double alpha0 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 0.0;

  static ParamCoordinate u1() { return {0.0, 1.0, 0.0}; }
  static ParamCoordinate u2() { return {0.0, 0.0, 1.0}; }
  static ParamCoordinate u3() { return {1.0, -1.0, -1.0}; }

  double rate(const Vec2& d) const { return alpha1 * d.x() + alpha2 * d.y(); }
};

double project_coord(const ParamCoordinate& coord, const State& u);
double flux_combination(const ParamCoordinate& coord, const Flux& f);

enum class PieceKind { shock, rarefaction };
std::string_view to_string(PieceKind k);

/// One wave of a group in state space. For shocks `speeds` are sigma(R, .)
/// and `rates` d sigma/ds; for rarefactions lambda and d lambda/ds.
struct BasePiece {
  PieceKind kind = PieceKind::shock;
  Family family = Family::slow;
  std::vector<State> points;
  std::vector<Vec2> tangents;  // unit, along the curve
  std::vector<double> speeds;
  std::vector<double> rates;
  std::optional<RarefactionSegment> segment;  // kept for re-integration
};

BasePiece shock_piece(const FluxModel& model, const State& ref, const HugoniotBranch& branch,
                      Family family, bool include_reference);
BasePiece rarefaction_piece(const FluxModel& model, const RarefactionSegment& segment,
                            const Tolerances& tol = {});

struct BaseCurve {
  State reference;
  ParamCoordinate coord;
  std::vector<BasePiece> pieces;
  std::vector<State> states;       // concatenation, shared joints once
  std::vector<double> ell_values;
  bool increasing = true;

  double ell_min() const;
  double ell_max() const;
};

/// Checks joints (1e-8) and strict monotonicity of l over every sample.
/// Throws NonMonotoneCoordinate naming the first offending sample.
BaseCurve make_base_curve(const State& ref, std::vector<BasePiece> pieces,
                          const ParamCoordinate& coord);

struct EffSample {
  double ell = 0.0;
  double f = 0.0;
  double fprime = 0.0;
  State state;
  Vec2 dstate{0.0, 0.0};  // d Gamma / d l
  std::size_t piece = 0;
};

enum class BreakTag { bethe_wendroff, inflection };
std::string_view to_string(BreakTag t);

struct Breakpoint {
  double ell = 0.0;
  BreakTag tag = BreakTag::bethe_wendroff;
  State state;
  Family before = Family::slow;
  Family after = Family::slow;
  std::size_t piece = 0;      // index of the piece that starts here
  double jump_f = 0.0;
  double jump_fprime = 0.0;
};

struct EffPiece {
  PieceKind kind = PieceKind::shock;
  Family family = Family::slow;
  std::size_t first = 0, last = 0;  // sample range, inclusive
  double lifting_error = 0.0;       // max |f - phi(Gamma)|
};

struct EffOptions {
  EffOptions() { continuation.max_step = 2e-3; }  // shock pieces are interpolated later

  ContinuationOptions continuation;
  RarefactionOptions rarefaction;
  std::optional<Vec2> start_direction;  // required where J is a multiple of I
  std::optional<double> ell_limit;      // stop once l passes this value
  int max_pieces = 12;
  double bw_angle = 1e-2;
  double richardson_tol = 1e-8;
  int max_refinements = 4;
  double locus_tol = 1e-8;  // RH residual accepted when resuming on H(R)
  // An inflection off H(R) ends the group instead of raising TransitionOffLocus.
  bool stop_off_locus = false;
};

/// Wave group geometry from R, before any choice of coordinate.
struct WaveGroup {
  enum class End {
    boundary,
    locus_end,
    inflection_start,
    off_locus,
    hyperbolicity_loss,
    max_length,
    max_pieces,
    no_branch
  };

  State reference;
  Family family = Family::slow;
  Orientation orientation = Orientation::forward;
  Vec2 direction{1.0, 0.0};
  std::vector<BasePiece> pieces;
  std::vector<BreakTag> transitions;  // transitions[i] sits between pieces i and i+1
  End end = End::boundary;
};

std::string_view to_string(WaveGroup::End e);

WaveGroup trace_wave_group(const FluxModel& model, const State& ref, Family family,
                           Orientation orientation, const EffOptions& opts = {},
                           const Tolerances& tol = {});

struct EffectiveFlux {
  State reference;
  Family family = Family::slow;
  Orientation orientation = Orientation::forward;
  ParamCoordinate coord;
  double ell_reference = 0.0;
  double phi_reference = 0.0;
  std::vector<EffSample> samples;  // along the base curve from R; joints repeated
  std::vector<EffPiece> pieces;
  std::vector<Breakpoint> breakpoints;
  BaseCurve base;
  WaveGroup::End end = WaveGroup::End::boundary;

  double ell_min() const;
  double ell_max() const;
  double ell_end() const { return samples.back().ell; }
  SampledFlux interpolant() const;
  /// Gamma(l) by cubic Hermite interpolation of the stored states.
  State state_at(double ell) const;
  /// Index of the piece containing l (first match along the curve).
  std::size_t piece_at(double ell) const;
};

/// Samples of the shock lifting f = phi(R) + sigma (l - l(R)).
std::vector<EffSample> lift_shock(const FluxModel& model, const State& ref,
                                  const BasePiece& piece, const ParamCoordinate& coord);

/// Samples of the rarefaction lifting f = f_start + integral of lambda dl by
/// the end-corrected trapezoid rule. When the Richardson estimate exceeds
/// opts.richardson_tol the segment is re-integrated with half the step,
/// in which case `piece` is replaced.
std::vector<EffSample> lift_rarefaction(const FluxModel& model, BasePiece& piece,
                                        const ParamCoordinate& coord, double f_start,
                                        const EffOptions& opts = {}, const Tolerances& tol = {});

EffectiveFlux lift_wave_group(const FluxModel& model, WaveGroup group,
                              const ParamCoordinate& coord, const EffOptions& opts = {},
                              const Tolerances& tol = {});

EffectiveFlux build_eff(const FluxModel& model, const State& ref, Family family,
                        Orientation orientation, const ParamCoordinate& coord,
                        const EffOptions& opts = {}, const Tolerances& tol = {});

/// max over samples of |f(l) - phi(Gamma(l))|.
double lifting_identity_error(const FluxModel& model, const EffectiveFlux& eff);

}  // namespace rieff
