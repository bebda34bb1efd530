#include "rieff/flux_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rieff {

namespace {

std::string describe(const State& u) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << u.u1 << ", " << u.u2 << ")";
  return os.str();
}

void require_domain(const State& u, const Tolerances& tol) {
  if (!std::isfinite(u.u1) || !std::isfinite(u.u2) || !in_domain(u, tol.eps_dom))
    throw DomainError("state " + describe(u) + " lies outside the saturation triangle");
}

Vec2 canonical_sign(Vec2 r) {
  const double n = r.norm();
  r /= n;
  const bool flip = std::abs(r.x()) > 1e-12 ? r.x() < 0.0 : r.y() < 0.0;
  return flip ? Vec2(-r) : r;
}

// Second-order derivative of g along the unit vector r at u; central when
// both neighbours lie in the triangle, one-sided otherwise.
template <class G>
double directional_derivative(const G& g, const State& u, const Vec2& r, double h, double eps) {
  const State up = u + h * r;
  const State um = u - h * r;
  const bool plus_ok = in_domain(up, eps);
  const bool minus_ok = in_domain(um, eps);
  if (plus_ok && minus_ok) return (g(up) - g(um)) / (2.0 * h);
  if (plus_ok && in_domain(u + 2.0 * h * r, eps))
    return (-3.0 * g(u) + 4.0 * g(up) - g(u + 2.0 * h * r)) / (2.0 * h);
  if (minus_ok && in_domain(u - 2.0 * h * r, eps))
    return (3.0 * g(u) - 4.0 * g(um) + g(u - 2.0 * h * r)) / (2.0 * h);
  return (g(up) - g(um)) / (2.0 * h);
}

}  // namespace

Mat2 FluxModel::jacobian_at(const State& u) const {
  constexpr double h = 1e-7;
  Mat2 j;
  for (int col = 0; col < 2; ++col) {
    Vec2 e = Vec2::Zero();
    e[col] = h;
    const Flux fp = flux(u + e);
    const Flux fm = flux(u - e);
    j(0, col) = (fp.f1 - fm.f1) / (2.0 * h);
    j(1, col) = (fp.f2 - fm.f2) / (2.0 * h);
  }
  return j;
}

CoreyModel::CoreyModel(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw ParameterError("Corey coefficients must be positive");
}

Flux CoreyModel::flux(const State& u) const {
  const double w = a_ * u.u1 * u.u1;
  const double g = b_ * u.u2 * u.u2;
  const double o = c_ * u.u3() * u.u3();
  const double q = w + g + o;
  const double f1 = w / q;
  const double f2 = g / q;
  return {f1, f2, o / q};
}

Mat2 CoreyModel::jacobian_at(const State& u) const {
  const double u3 = u.u3();
  const double q = a_ * u.u1 * u.u1 + b_ * u.u2 * u.u2 + c_ * u3 * u3;
  const double q1 = 2.0 * a_ * u.u1 - 2.0 * c_ * u3;
  const double q2 = 2.0 * b_ * u.u2 - 2.0 * c_ * u3;
  const double qq = q * q;
  const double w = a_ * u.u1 * u.u1;
  const double g = b_ * u.u2 * u.u2;
  Mat2 j;
  j(0, 0) = (2.0 * a_ * u.u1 * q - w * q1) / qq;
  j(0, 1) = -w * q2 / qq;
  j(1, 0) = -g * q1 / qq;
  j(1, 1) = (2.0 * b_ * u.u2 * q - g * q2) / qq;
  return j;
}

Flux eval_flux(const FluxModel& model, const State& u, const Tolerances& tol) {
  require_domain(u, tol);
  return model.flux(u);
}

Mat2 jacobian(const FluxModel& model, const State& u, const Tolerances& tol) {
  require_domain(u, tol);
  return model.jacobian_at(u);
}

CharField eigen_fields(const FluxModel& model, const State& u, const Tolerances& tol) {
  const Mat2 j = model.jacobian_at(u);
  const double a = j(0, 0), b = j(0, 1), c = j(1, 0), d = j(1, 1);
  const double p = 0.5 * (a - d);
  const double half_disc = p * p + b * c;

  CharField cf;
  cf.discriminant = 4.0 * half_disc;
  if (cf.discriminant < -tol.eps_hyp)
    throw HyperbolicityLoss("complex characteristic speeds at " + describe(u));

  const double q = std::sqrt(std::max(half_disc, 0.0));
  const double m = 0.5 * (a + d);
  cf.lambda_s = m - q;
  cf.lambda_f = m + q;
  cf.near_coincidence = (cf.lambda_f - cf.lambda_s) < tol.eps_coinc;

  const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  const double split = std::abs(p) + q;
  if (split <= 1e-13 * scale || scale == 0.0) {
    if (std::abs(b) + std::abs(c) <= 1e-13 * scale || scale == 0.0) {
      cf.degenerate = true;
      cf.r_s = Vec2(1.0, 0.0);
      cf.r_f = Vec2(0.0, 1.0);
    } else {
      const Vec2 r = std::abs(b) >= std::abs(c) ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
      cf.r_s = r;
      cf.r_f = r;
    }
    return cf;
  }

  // Cancellation-free choice between the two null-space candidates
  // (b, lambda - a) and (lambda - d, c).
  Vec2 rf, rs;
  if (p >= 0.0) {
    rf = Vec2(p + q, c);
    rs = Vec2(b, -p - q);
  } else {
    rf = Vec2(b, q - p);
    rs = Vec2(p - q, c);
  }
  cf.r_f = canonical_sign(rf);
  cf.r_s = canonical_sign(rs);
  return cf;
}

double nonlinearity(const FluxModel& model, const State& u, Family k, const Tolerances& tol) {
  const CharField cf = eigen_fields(model, u, tol);
  const auto lam = [&](const State& v) { return eigen_fields(model, v, tol).lambda(k); };
  return directional_derivative(lam, u, cf.r(k), tol.h_nl, tol.eps_dom);
}

CharField char_fields(const FluxModel& model, const State& u, const Tolerances& tol) {
  require_domain(u, tol);
  CharField cf = eigen_fields(model, u, tol);
  if (cf.degenerate) return cf;
  for (Family k : {Family::slow, Family::fast}) {
    const double nl = nonlinearity(model, u, k, tol);
    if (nl < -tol.eps_nl) {
      if (k == Family::slow)
        cf.r_s = -cf.r_s;
      else
        cf.r_f = -cf.r_f;
    }
  }
  return cf;
}

FollowedEigen follow_eigen(const FluxModel& model, const State& u, const Vec2& direction,
                           const Tolerances& tol) {
  const CharField cf = eigen_fields(model, u, tol);
  const Vec2 d = direction.normalized();
  FollowedEigen out;
  if (cf.degenerate) {
    out.lambda = 0.5 * (cf.lambda_s + cf.lambda_f);
    out.r = d;
    out.family = Family::slow;
    return out;
  }
  const double ds = std::abs(cf.r_s.dot(d));
  const double df = std::abs(cf.r_f.dot(d));
  out.family = ds >= df ? Family::slow : Family::fast;
  out.lambda = cf.lambda(out.family);
  out.r = cf.r(out.family);
  if (out.r.dot(d) < 0.0) out.r = -out.r;
  return out;
}

double followed_nonlinearity(const FluxModel& model, const State& u, const Vec2& direction,
                             const Tolerances& tol) {
  const Vec2 r = follow_eigen(model, u, direction, tol).r;
  const auto lam = [&](const State& v) { return follow_eigen(model, v, r, tol).lambda; };
  return directional_derivative(lam, u, r, tol.h_nl, tol.eps_dom);
}

}  // namespace rieff
