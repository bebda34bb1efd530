#include "rieff/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace rieff {

double spectral_radius(const FluxModel& model, const State& u) {
  const Mat2 J = model.jacobian_at(u);
  const double tr = J.trace(), det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  const std::complex<double> root = std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0.0));
  return std::max(std::abs(0.5 * tr + root), std::abs(0.5 * tr - root));
}

namespace {

// Pulls a state back into the triangle; returns true if it moved.
bool clamp(State& u) {
  State v = u;
  v.u1 = std::clamp(v.u1, 0.0, 1.0);
  v.u2 = std::clamp(v.u2, 0.0, 1.0);
  const double over = v.u1 + v.u2 - 1.0;
  if (over > 0.0) {
    v.u1 -= 0.5 * over;
    v.u2 -= 0.5 * over;
    if (v.u1 < 0.0) {
      v.u2 += v.u1;
      v.u1 = 0.0;
    }
    if (v.u2 < 0.0) {
      v.u1 += v.u2;
      v.u2 = 0.0;
    }
  }
  const bool moved = v.u1 != u.u1 || v.u2 != u.u2;
  u = v;
  return moved;
}

double checked_radius(const FluxModel& model, const State& u, const FvmOptions& opts) {
  const double r = spectral_radius(model, u);
  if (!std::isfinite(r) || r > opts.max_speed)
    throw CFLViolation("wave speed " + std::to_string(r) + " at (" + std::to_string(u.u1) + ", " +
                       std::to_string(u.u2) + ")");
  return r;
}

double max_speed_on_triangle(const FluxModel& model) {
  double a = 0.0;
  const int n = 40;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) a = std::max(a, spectral_radius(model, {double(i) / n, double(j) / n}));
  return a;
}

}  // namespace

Grid1D make_riemann_grid(const FluxModel& model, const State& ul, const State& ur, int N,
                         double t_end, const FvmOptions& opts) {
  if (N < 16) throw ParameterError("N must be at least 16, got " + std::to_string(N));
  if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
  if (!(opts.cfl > 0.0 && opts.cfl <= 0.5)) throw ParameterError("cfl must lie in (0, 0.5]");
  const Tolerances tol;
  if (!in_domain(ul, tol.eps_dom) || !in_domain(ur, tol.eps_dom))
    throw DomainError("Riemann data outside the saturation triangle");

  Grid1D g;
  g.N = N;
  g.cfl = opts.cfl;
  const double X =
      opts.x_extent ? *opts.x_extent : std::max(1.0, 1.1 * max_speed_on_triangle(model) * t_end);
  if (!(X > 0.0)) throw ParameterError("x_extent must be positive");
  g.x_min = -X;
  g.x_max = X;
  g.cells.resize(N);
  for (int i = 0; i < N; ++i) g.cells[i] = g.center(i) < 0.0 ? ul : ur;
  return g;
}

StepFluxes fvm_step(const FluxModel& model, Grid1D& grid, double dt_max, const FvmOptions& opts) {
  const int N = grid.N;
  std::vector<Vec2> F(N);
  std::vector<double> a(N);
  for (int i = 0; i < N; ++i) {
    F[i] = model.flux(grid.cells[i]).vec();
    a[i] = checked_radius(model, grid.cells[i], opts);
  }

  // Interfaces 0..N, ghost cells copy the end cells. The speed bound also
  // looks at the midpoint: at the vertices J vanishes while the speeds in
  // between do not.
  std::vector<Vec2> G(N + 1);
  G[0] = F[0];
  G[N] = F[N - 1];
  double amax = 0.0;
  for (int i = 0; i + 1 < N; ++i) {
    const State& ul = grid.cells[i];
    const State& ur = grid.cells[i + 1];
    double al = std::max(a[i], a[i + 1]);
    if (ul != ur) al = std::max(al, checked_radius(model, {0.5 * (ul.u1 + ur.u1), 0.5 * (ul.u2 + ur.u2)}, opts));
    amax = std::max(amax, al);
    G[i + 1] = 0.5 * (F[i] + F[i + 1]) - 0.5 * al * (ur - ul);
  }
  const double dx = grid.dx();
  double dt = dt_max;
  if (amax > 0.0) dt = std::min(dt, grid.cfl * dx / amax);

  const double r = dt / dx;
  for (int i = 0; i < N; ++i) {
    grid.cells[i] = grid.cells[i] - r * (G[i + 1] - G[i]);
    if (clamp(grid.cells[i])) ++grid.clamp_events;
  }
  grid.time += dt;
  ++grid.steps;
  return {G[0], G[N], dt};
}

Grid1D simulate(const FluxModel& model, const State& ul, const State& ur, int N, double t_end,
                const FvmOptions& opts) {
  Grid1D g = make_riemann_grid(model, ul, ur, N, t_end, opts);
  while (g.time < t_end) {
    const double remaining = t_end - g.time;
    if (remaining <= 1e-14 * t_end) break;
    fvm_step(model, g, remaining, opts);
  }
  return g;
}

double l1_compare(const Grid1D& grid, const RiemannSolution& sol, double t) {
  if (!(t > 0.0)) throw ParameterError("comparison time must be positive");
  std::vector<double> xi(grid.N);
  for (int i = 0; i < grid.N; ++i) xi[i] = grid.center(i) / t;
  const auto exact = sample_profile(sol, xi);
  double err = 0.0;
  for (int i = 0; i < grid.N; ++i)
    err += std::abs(grid.cells[i].u1 - exact[i].u1) + std::abs(grid.cells[i].u2 - exact[i].u2);
  return err * grid.dx();
}

}  // namespace rieff
