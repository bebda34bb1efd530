#include "rieff/rarefaction.hpp"

#include <algorithm>
#include <cmath>

namespace rieff {

std::string_view to_string(RarefactionSegment::Stop s) {
  switch (s) {
    case RarefactionSegment::Stop::inflection: return "inflection";
    case RarefactionSegment::Stop::boundary: return "boundary";
    case RarefactionSegment::Stop::hyperbolicity_loss: return "hyperbolicity_loss";
    case RarefactionSegment::Stop::max_length: return "max_length";
  }
  return "?";
}

namespace {

struct Stepper {
  const FluxModel& model;
  const Tolerances& tol;

  Vec2 field(const State& u, const Vec2& prev) const {
    return follow_eigen(model, u, prev, tol).r;
  }

  // One classical RK4 step of length h; returns the new state.
  State step(const State& u, const Vec2& r, double h) const {
    const Vec2 k1 = field(u, r);
    const Vec2 k2 = field(u + 0.5 * h * k1, k1);
    const Vec2 k3 = field(u + 0.5 * h * k2, k2);
    const Vec2 k4 = field(u + h * k3, k3);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // Rate of change of the followed speed along the motion, signed so that a
  // positive value means the requested monotonicity holds.
  double monotonicity(const State& u, const Vec2& r, double sign) const {
    return sign * followed_nonlinearity(model, u, r, tol);
  }
};

// Fraction of the chord a -> b at which it leaves the triangle.
double exit_fraction(const State& a, const State& b) {
  const auto s0 = constraint_slack(a);
  const auto s1 = constraint_slack(b);
  double frac = 1.0;
  for (int c = 0; c < 3; ++c)
    if (s1[c] < 0.0 && s0[c] > s1[c]) frac = std::min(frac, std::max(s0[c], 0.0) / (s0[c] - s1[c]));
  return frac;
}

}  // namespace

RarefactionSegment integrate_rarefaction(const FluxModel& model, const State& u0, Family family,
                                         Orientation direction, const RarefactionOptions& opts,
                                         const Tolerances& tol,
                                         std::optional<Vec2> initial_direction) {
  if (!in_domain(u0, tol.eps_dom)) throw DomainError("rarefaction start outside the triangle");
  const Stepper st{model, tol};
  const double sign = direction == Orientation::forward ? 1.0 : -1.0;

  RarefactionSegment seg;
  seg.family = family;
  seg.direction = direction;

  Vec2 r;
  FollowedEigen start;
  if (initial_direction) {
    start = follow_eigen(model, u0, *initial_direction, tol);
    r = start.r;
    seg.family = start.family;
  } else {
    const CharField cf = eigen_fields(model, u0, tol);
    if (cf.degenerate) throw StartDegenerate("eigenvector field undefined at the rarefaction start");
    r = cf.r(family);
    start = {cf.lambda(family), r, family};
  }
  double m = st.monotonicity(u0, r, 1.0);
  if (!initial_direction && m * sign < 0.0) {
    r = -r;
    m = -m;
  }
  m *= sign;

  const auto push = [&](const State& u, const Vec2& t) {
    const FollowedEigen fe = follow_eigen(model, u, t, tol);
    const double s = seg.points.empty() ? 0.0 : seg.arclength.back() + distance(seg.points.back(), u);
    seg.points.push_back(u);
    seg.lambdas.push_back(fe.lambda);
    seg.tangents.push_back(fe.r);
    seg.arclength.push_back(s);
    seg.families.push_back(fe.family);
  };
  push(u0, r);
  if (m < tol.eps_nl) {
    seg.start_at_inflection = true;
    seg.stop_reason = RarefactionSegment::Stop::inflection;
    return seg;
  }

  const double h = opts.step;
  while (true) {
    const State u = seg.points.back();
    const Vec2 t = seg.tangents.back();
    if (seg.arclength.back() >= opts.max_length) {
      seg.stop_reason = RarefactionSegment::Stop::max_length;
      return seg;
    }
    State next;
    double h_eff = h;
    bool at_boundary = false;
    Vec2 t_next;
    double m_next = 0.0;
    try {
      next = st.step(u, t, h);
      if (!in_domain(next, tol.eps_dom)) {
        // Linear backtracking gives the first guess; the RK4 step length
        // is then bisected so the landing point stays on the curve.
        const double f = exit_fraction(u, next);
        double a = 0.0, b = h;
        const auto slack = [&](double tau) {
          const auto s = constraint_slack(st.step(u, t, tau));
          return std::min({s[0], s[1], s[2]});
        };
        double guess = f * h;
        if (slack(guess) >= 0.0)
          a = guess;
        else
          b = guess;
        for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
          const double mid = 0.5 * (a + b);
          if (slack(mid) >= 0.0)
            a = mid;
          else
            b = mid;
        }
        h_eff = b;
        next = snap_to_domain(st.step(u, t, b), 1e-9);
        at_boundary = true;
      }
      if (h_eff < 1e-14) {
        seg.stop_reason = RarefactionSegment::Stop::boundary;
        return seg;
      }
      t_next = st.field(next, t);
      m_next = st.monotonicity(next, t_next, sign);
    } catch (const HyperbolicityLoss&) {
      seg.stop_reason = RarefactionSegment::Stop::hyperbolicity_loss;
      return seg;
    }

    const double lam_next = follow_eigen(model, next, t_next, tol).lambda;
    const bool monotone = sign * (lam_next - seg.lambdas.back()) > 0.0;
    if (m_next < 0.0 || !monotone) {
      // Bisection on the step length for the zero of the monotonicity rate.
      double a = 0.0, b = h_eff;
      State best = u;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const State um = st.step(u, t, mid);
        const double mm = st.monotonicity(um, st.field(um, t), sign);
        best = um;
        if (std::abs(mm) <= opts.nl_tol) break;
        if (mm > 0.0)
          a = mid;
        else
          b = mid;
      }
      if (distance(best, u) > 1e-13) {
        const Vec2 tb = st.field(best, t);
        const double lb = follow_eigen(model, best, tb, tol).lambda;
        if (sign * (lb - seg.lambdas.back()) > 0.0) push(best, tb);
      }
      seg.stop_reason = RarefactionSegment::Stop::inflection;
      return seg;
    }
    push(next, t_next);
    if (at_boundary) {
      seg.stop_reason = RarefactionSegment::Stop::boundary;
      return seg;
    }
  }
}

State find_inflection(const FluxModel& model, const RarefactionSegment& segment,
                      const Tolerances& tol) {
  (void)model;
  (void)tol;
  if (segment.stop_reason != RarefactionSegment::Stop::inflection || segment.points.empty())
    throw NotAnInflectionStop("segment stopped by " + std::string(to_string(segment.stop_reason)));
  return segment.points.back();
}

}  // namespace rieff
