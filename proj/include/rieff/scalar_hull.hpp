#pragma once

#include "rieff/eff.hpp"
#include "rieff/sampled_flux.hpp"

#include <vector>

namespace rieff {

struct ScalarWave {
  PieceKind kind = PieceKind::shock;
  double ell_left = 0.0;   // side of the left Riemann state
  double ell_right = 0.0;
  double speed_left = 0.0;
  double speed_right = 0.0;
};

/// Root of T(l) = f'(l)(l - lR) - (f(l) - f(lR)) on [lo, hi], the first one
/// met walking away from lR. Throws NoTangency if T keeps its sign.
double welge_point(const SampledFlux& f, double ell_r, double lo, double hi);
double welge_point(const EffectiveFlux& eff, double ell_r, double lo, double hi);

/// Olejnik construction: lower convex hull of f between the two values when
/// ell_l < ell_r, upper concave hull otherwise. Waves are ordered from the
/// left state to the right state.
std::vector<ScalarWave> hull_solution(const SampledFlux& f, double ell_l, double ell_r);
std::vector<ScalarWave> hull_solution(const EffectiveFlux& eff, double ell_l, double ell_r);

struct CoreyWelge {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  bool ordered = false;  // l3 < min(l1, l2)
};

/// Closed-form Welge values for the two edges (l1, l2) and the separatrix
/// (l3) of the quadratic Corey model, measured in l = u3.
CoreyWelge corey_welge_closed_form(double a, double b, double c);

}  // namespace rieff
