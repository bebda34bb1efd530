#pragma once

#include "rieff/errors.hpp"
#include "rieff/state.hpp"

#include <string>

namespace rieff {

/// A 2x2 saturation-type flux F(U) = (f1, f2) with redundant f3 = 1 - f1 - f2.
///
/// flux() and jacobian() are evaluated without domain checks so that
/// integrator stages may probe slightly outside the triangle; the checked
/// entry points are the free functions eval_flux() and jacobian().
class FluxModel {
 public:
  virtual ~FluxModel() = default;

  virtual Flux flux(const State& u) const = 0;

  /// Central finite differences; models with closed forms override this.
  virtual Mat2 jacobian_at(const State& u) const;

  virtual std::string name() const = 0;
};

/// Quadratic Corey permeabilities: f_i = a_i u_i^2 / (A u1^2 + B u2^2 + C u3^2).
class CoreyModel final : public FluxModel {
 public:
  CoreyModel(double a, double b, double c);

  Flux flux(const State& u) const override;
  Mat2 jacobian_at(const State& u) const override;
  std::string name() const override { return "corey"; }

  double A() const { return a_; }
  double B() const { return b_; }
  double C() const { return c_; }

 private:
  double a_, b_, c_;
};

/// Characteristic speeds and unit eigenvectors of the flux Jacobian.
struct CharField {
  double lambda_s = 0.0;
  double lambda_f = 0.0;
  Vec2 r_s{1.0, 0.0};
  Vec2 r_f{0.0, 1.0};
  double discriminant = 0.0;  // (tr J)^2 - 4 det J
  bool near_coincidence = false;
  bool degenerate = false;  // J is (numerically) a multiple of the identity

  double lambda(Family k) const { return k == Family::slow ? lambda_s : lambda_f; }
  const Vec2& r(Family k) const { return k == Family::slow ? r_s : r_f; }
};

Flux eval_flux(const FluxModel& model, const State& u, const Tolerances& tol = {});
Mat2 jacobian(const FluxModel& model, const State& u, const Tolerances& tol = {});

/// Eigen-decomposition with a canonical sign (first nonzero component
/// positive). No orientation by nonlinearity; throws HyperbolicityLoss.
CharField eigen_fields(const FluxModel& model, const State& u, const Tolerances& tol = {});

/// eigen_fields() with each r_k flipped so that grad(lambda_k) . r_k >= 0
/// wherever |grad(lambda_k) . r_k| > eps_nl.
CharField char_fields(const FluxModel& model, const State& u, const Tolerances& tol = {});

/// grad(lambda_k) . r_k with r_k in canonical sign, so the value changes sign
/// across an inflection. One-sided stencils are used near the boundary.
double nonlinearity(const FluxModel& model, const State& u, Family k, const Tolerances& tol = {});

/// Eigenpair whose eigenvector is best aligned with `direction`, returned
/// with the eigenvector oriented along it. Used to follow a field by
/// continuity through family swaps.
struct FollowedEigen {
  double lambda = 0.0;
  Vec2 r{1.0, 0.0};
  Family family = Family::slow;
};
FollowedEigen follow_eigen(const FluxModel& model, const State& u, const Vec2& direction,
                           const Tolerances& tol = {});

/// Directional derivative of the followed eigenvalue along the unit
/// vector `direction`.
double followed_nonlinearity(const FluxModel& model, const State& u, const Vec2& direction,
                             const Tolerances& tol = {});

}  // namespace rieff
