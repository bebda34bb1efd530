#pragma once

#include "rieff/flux_model.hpp"
#include "rieff/riemann.hpp"

#include <optional>
#include <vector>

namespace rieff {

struct Grid1D {
  int N = 0;
  double x_min = -1.0, x_max = 1.0;
  double cfl = 0.45;
  double time = 0.0;
  long steps = 0;
  long clamp_events = 0;  // cells pulled back into the triangle
  std::vector<State> cells;

  double dx() const { return (x_max - x_min) / N; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

struct FvmOptions {
  double cfl = 0.45;
  // Half width X of [-X, X]. Unset: wide enough that no wave leaves by t_end.
  std::optional<double> x_extent;
  double max_speed = 1e6;  // spectral radius above this raises CFLViolation
};

/// Riemann data on [-X, X], cell i+1/2 boundary at x = 0.
Grid1D make_riemann_grid(const FluxModel& model, const State& ul, const State& ur, int N,
                         double t_end, const FvmOptions& opts = {});

/// Boundary fluxes used by one step, for conservation checks.
struct StepFluxes {
  Vec2 left{0.0, 0.0};
  Vec2 right{0.0, 0.0};
  double dt = 0.0;
};

/// One explicit LLF step no longer than dt_max. Returns the step taken.
StepFluxes fvm_step(const FluxModel& model, Grid1D& grid, double dt_max,
                    const FvmOptions& opts = {});

Grid1D simulate(const FluxModel& model, const State& ul, const State& ur, int N, double t_end,
                const FvmOptions& opts = {});

/// Largest |lambda| of the flux Jacobian at u.
double spectral_radius(const FluxModel& model, const State& u);

/// sum dx (|du1| + |du2|) against the wave-curve solution at xi = x / t.
double l1_compare(const Grid1D& grid, const RiemannSolution& sol, double t);

}  // namespace rieff
