#include "rieff/hugoniot.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rieff {

std::string_view to_string(LaxTag t) {
  switch (t) {
    case LaxTag::slow_shock: return "slow_shock";
    case LaxTag::fast_shock: return "fast_shock";
    case LaxTag::overcompressive: return "overcompressive";
    case LaxTag::undercompressive: return "undercompressive";
    case LaxTag::characteristic_left: return "characteristic_left";
    case LaxTag::characteristic_right: return "characteristic_right";
  }
  return "?";
}

std::string_view to_string(HugoniotBranch::Stop s) {
  switch (s) {
    case HugoniotBranch::Stop::boundary: return "boundary";
    case HugoniotBranch::Stop::max_steps: return "max_steps";
    case HugoniotBranch::Stop::max_length: return "max_length";
    case HugoniotBranch::Stop::closed_loop: return "closed_loop";
    case HugoniotBranch::Stop::step_underflow: return "step_underflow";
  }
  return "?";
}

void HugoniotBranch::push_back(const LocusPoint& p) {
  const double s = points.empty() ? 0.0 : arclength.back() + distance(points.back(), p.state);
  points.push_back(p.state);
  sigmas.push_back(p.sigma);
  tangents.push_back(p.tangent);
  dsigma_ds.push_back(p.dsigma_ds);
  arclength.push_back(s);
}

ShockSpeed shock_speed(const FluxModel& model, const State& ref, const State& u) {
  const Vec2 du = u - ref;
  if (std::abs(du.x()) < 1e-14 && std::abs(du.y()) < 1e-14)
    throw CoincidentStates("shock speed requested for coincident states");
  const Vec2 df = model.flux(u).vec() - model.flux(ref).vec();
  const double sigma = df.dot(du) / du.dot(du);
  return {sigma, (df - sigma * du).norm()};
}

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Constraint {
  Vec2 normal;
  double value;
};

// Null vector of [J - sigma I, -(U - R)], oriented along `hint`.
std::optional<LocusPoint> with_tangent(const FluxModel& model, const State& ref, const State& u,
                                       double sigma, const Vec2& hint) {
  const Mat2 j = model.jacobian_at(u);
  const Vec2 du = u - ref;
  const Eigen::Vector3d g1(j(0, 0) - sigma, j(0, 1), -du.x());
  const Eigen::Vector3d g2(j(1, 0), j(1, 1) - sigma, -du.y());
  Eigen::Vector3d t = g1.cross(g2);
  const double nu = t.head<2>().norm();
  if (!(nu > 1e-300)) return std::nullopt;
  if (t.head<2>().dot(hint) < 0.0) t = -t;
  LocusPoint p;
  p.state = u;
  p.sigma = sigma;
  p.tangent = t.head<2>() / nu;
  p.dsigma_ds = t.z() / nu;
  return p;
}

std::optional<LocusPoint> correct(const FluxModel& model, const State& ref, State u, double sigma,
                                  const Constraint& con, const Vec2& hint,
                                  const ContinuationOptions& opts, int* iterations = nullptr) {
  const Vec2 fref = model.flux(ref).vec();
  bool converged = false;
  int it = 0;
  for (; it < opts.max_newton; ++it) {
    const Vec2 du = u - ref;
    const Vec2 rh = model.flux(u).vec() - fref - sigma * du;
    const double rc = con.normal.dot(u.vec()) - con.value;
    Eigen::Matrix3d m;
    const Mat2 j = model.jacobian_at(u);
    m << j(0, 0) - sigma, j(0, 1), -du.x(),
         j(1, 0), j(1, 1) - sigma, -du.y(),
         con.normal.x(), con.normal.y(), 0.0;
    const Eigen::Vector3d rhs(-rh.x(), -rh.y(), -rc);
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector3d dx = lu.solve(rhs);
    if (!dx.allFinite()) return std::nullopt;
    u.u1 += dx.x();
    u.u2 += dx.y();
    sigma += dx.z();
    if (dx.norm() <= 1e-12 * (1.0 + std::abs(sigma))) {
      const Vec2 rh2 = model.flux(u).vec() - fref - sigma * (u - ref);
      if (rh2.norm() <= opts.newton_tol) {
        converged = true;
        ++it;
        break;
      }
    }
  }
  if (iterations) *iterations = it;
  if (!converged) return std::nullopt;
  const Vec2 du = u - ref;
  if (du.norm() < 1e-14) return std::nullopt;
  sigma = shock_speed(model, ref, u).sigma;
  return with_tangent(model, ref, u, sigma, hint);
}

// Lands on the first triangle edge crossed by the chord cur -> out.
std::optional<LocusPoint> land_on_boundary(const FluxModel& model, const State& ref,
                                           const LocusPoint& cur, const LocusPoint& out,
                                           const ContinuationOptions& opts,
                                           const Tolerances& tol) {
  const auto s0 = constraint_slack(cur.state);
  const auto s1 = constraint_slack(out.state);
  const auto normals = constraint_normals();
  int hit = -1;
  double frac = 2.0;
  for (int c = 0; c < 3; ++c) {
    if (s1[c] < -tol.eps_dom) {
      const double f = s0[c] / (s0[c] - s1[c]);
      if (f < frac) {
        frac = f;
        hit = c;
      }
    }
  }
  if (hit < 0) return std::nullopt;
  frac = std::clamp(frac, 0.0, 1.0);
  const State guess = cur.state + frac * (out.state - cur.state);
  const double sg = cur.sigma + frac * (out.sigma - cur.sigma);
  const Vec2 n = normals[hit].normalized();
  // slack_c(U) = 0  <=>  n . U = -offset / |normal|
  const double offset = hit == 2 ? 1.0 : 0.0;
  const Constraint con{n, -offset / normals[hit].norm()};
  auto p = correct(model, ref, guess, sg, con, cur.tangent, opts);
  if (!p) return std::nullopt;
  if (!in_domain(p->state, 1e-9)) return std::nullopt;
  if (distance(p->state, cur.state) > 2.0 * distance(out.state, cur.state) + 1e-12)
    return std::nullopt;
  p->state = snap_to_domain(p->state, 1e-9);
  p->sigma = shock_speed(model, ref, p->state).sigma;
  if (auto q = with_tangent(model, ref, p->state, p->sigma, cur.tangent)) return q;
  return p;
}

double angle_between(const Vec2& a, const Vec2& b) {
  const double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
  return std::acos(c);
}

void run_continuation(const FluxModel& model, HugoniotBranch& branch,
                      const ContinuationOptions& opts, const Tolerances& tol) {
  const State ref = branch.reference;
  double h = std::min(opts.first_step, opts.max_step);
  int steps = 0;
  branch.stop = HugoniotBranch::Stop::max_steps;
  while (steps < opts.max_steps) {
    if (branch.arclength.back() >= opts.max_length) {
      branch.stop = HugoniotBranch::Stop::max_length;
      return;
    }
    const LocusPoint cur = branch.at(branch.size() - 1);
    const State pred = cur.state + h * cur.tangent;
    const double sp = cur.sigma + h * cur.dsigma_ds;
    const Constraint con{cur.tangent, cur.tangent.dot(pred.vec())};
    int iters = 0;
    auto next = correct(model, ref, pred, sp, con, cur.tangent, opts, &iters);
    bool ok = next && distance(next->state, pred) <= 0.5 * h &&
              angle_between(next->tangent, cur.tangent) <= opts.max_turn;
    if (ok && !in_domain(next->state, tol.eps_dom)) {
      if (auto landed = land_on_boundary(model, ref, cur, *next, opts, tol)) {
        if (distance(landed->state, cur.state) > 1e-14) branch.push_back(*landed);
        branch.stop = HugoniotBranch::Stop::boundary;
        return;
      }
      ok = false;
    }
    if (!ok) {
      h *= 0.5;
      if (h < opts.min_step)
        throw NewtonDivergence("Hugoniot continuation stalled after " +
                               std::to_string(branch.size()) + " points");
      continue;
    }
    next->state = snap_to_domain(next->state, tol.eps_dom);
    branch.push_back(*next);
    ++steps;
    if (steps > 5 && (distance(next->state, branch.points.front()) < 0.5 * h ||
                      distance(next->state, ref) < 0.5 * opts.first_step)) {
      branch.stop = HugoniotBranch::Stop::closed_loop;
      return;
    }
    if (iters <= 3 && angle_between(next->tangent, cur.tangent) < 0.25 * opts.max_turn)
      h = std::min(1.5 * h, opts.max_step);
  }
}

// Feasible direction cone of the triangle at R as [theta_a, theta_b] with
// exact endpoint vectors; `full` when R is interior.
struct DirectionCone {
  bool full = true;
  double a = 0.0, b = 2.0 * std::numbers::pi;
  Vec2 da{1.0, 0.0}, db{1.0, 0.0};
};

DirectionCone feasible_cone(const State& r, double eps) {
  using std::numbers::pi;
  const bool on1 = r.u1 <= eps, on2 = r.u2 <= eps, on3 = r.u3() <= eps;
  const double s = std::sqrt(0.5);
  DirectionCone c;
  c.full = !(on1 || on2 || on3);
  if (on1 && on2) {
    c = {false, 0.0, 0.5 * pi, {1, 0}, {0, 1}};
  } else if (on2 && on3) {
    c = {false, 0.75 * pi, pi, {-s, s}, {-1, 0}};
  } else if (on1 && on3) {
    c = {false, -0.5 * pi, -0.25 * pi, {0, -1}, {s, -s}};
  } else if (on1) {
    c = {false, -0.5 * pi, 0.5 * pi, {0, -1}, {0, 1}};
  } else if (on2) {
    c = {false, 0.0, pi, {1, 0}, {-1, 0}};
  } else if (on3) {
    c = {false, 0.75 * pi, 1.75 * pi, {-s, s}, {s, -s}};
  }
  return c;
}

}  // namespace

std::vector<HugoniotStart> hugoniot_starts(const FluxModel& model, const State& ref,
                                           const ContinuationOptions& opts,
                                           const Tolerances& tol) {
  if (!in_domain(ref, tol.eps_dom)) throw DomainError("reference state outside the triangle");
  const double rho = opts.first_step;
  const Vec2 fref = model.flux(ref).vec();
  const auto hfun = [&](const Vec2& d) {
    return cross(model.flux(ref + rho * d).vec() - fref, d) / rho;
  };
  const DirectionCone cone = feasible_cone(ref, tol.eps_dom);
  const int m = std::max(opts.scan_samples, 16);

  std::vector<double> theta;
  std::vector<Vec2> dirs;
  if (cone.full) {
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * std::numbers::pi * i / m;
      theta.push_back(t);
      dirs.emplace_back(std::cos(t), std::sin(t));
    }
  } else {
    for (int i = 0; i <= m; ++i) {
      const double t = cone.a + (cone.b - cone.a) * i / m;
      theta.push_back(t);
      dirs.push_back(i == 0 ? cone.da : i == m ? cone.db : Vec2(std::cos(t), std::sin(t)));
    }
  }
  std::vector<double> hv(dirs.size());
  double hmax = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    hv[i] = hfun(dirs[i]);
    hmax = std::max(hmax, std::abs(hv[i]));
  }
  if (hmax == 0.0) throw StartDegenerate("flux jump vanishes around the reference state");
  const double zero = 1e-10 * hmax;

  std::vector<Vec2> roots;
  const auto add_root = [&](const Vec2& d) {
    for (const auto& r : roots)
      if (angle_between(r, d) < 1e-6) return;
    roots.push_back(d);
  };
  const std::size_t n = dirs.size();
  const std::size_t pairs = cone.full ? n : n - 1;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(hv[i]) <= zero) add_root(dirs[i]);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t k = (i + 1) % n;
    if (std::abs(hv[i]) <= zero || std::abs(hv[k]) <= zero) continue;
    if ((hv[i] < 0.0) == (hv[k] < 0.0)) continue;
    double ta = theta[i];
    double tb = (k == 0) ? theta[i] + 2.0 * std::numbers::pi / m : theta[k];
    double ha = hv[i];
    for (int it = 0; it < 100 && tb - ta > 1e-15; ++it) {
      const double tm = 0.5 * (ta + tb);
      const double hm = hfun(Vec2(std::cos(tm), std::sin(tm)));
      if (hm == 0.0) {
        ta = tb = tm;
        break;
      }
      if ((hm < 0.0) == (ha < 0.0)) {
        ta = tm;
        ha = hm;
      } else {
        tb = tm;
      }
    }
    const double t = 0.5 * (ta + tb);
    add_root(Vec2(std::cos(t), std::sin(t)));
  }

  std::optional<CharField> cf;
  try {
    cf = eigen_fields(model, ref, tol);
  } catch (const HyperbolicityLoss& e) {
    throw StartDegenerate(e.what());
  }
  std::vector<HugoniotStart> starts;
  for (const auto& d : roots) {
    HugoniotStart s;
    s.direction = d;
    s.point = snap_to_domain(ref + rho * d, tol.eps_dom);
    if (!in_domain(s.point, tol.eps_dom)) continue;
    const CharField& at = cf->degenerate ? eigen_fields(model, s.point, tol) : *cf;
    if (!at.degenerate)
      s.family = std::abs(at.r_s.dot(d)) >= std::abs(at.r_f.dot(d)) ? Family::slow : Family::fast;
    starts.push_back(s);
  }
  if (starts.empty()) throw StartDegenerate("no Hugoniot branch leaves the reference state");
  return starts;
}

HugoniotBranch trace_branch(const FluxModel& model, const State& ref, const HugoniotStart& start,
                            const ContinuationOptions& opts, const Tolerances& tol) {
  HugoniotBranch branch;
  branch.reference = ref;
  branch.start_direction = start.direction;
  branch.start_family = start.family;
  const Constraint con{start.direction, start.direction.dot(start.point.vec())};
  const double s0 = shock_speed(model, ref, start.point).sigma;
  auto first = correct(model, ref, start.point, s0, con, start.direction, opts);
  if (!first) throw NewtonDivergence("corrector failed at the first Hugoniot point");
  first->state = snap_to_domain(first->state, tol.eps_dom);
  branch.push_back(*first);
  run_continuation(model, branch, opts, tol);
  classify_branch(model, branch, Orientation::forward, tol);
  return branch;
}

std::vector<HugoniotBranch> trace_hugoniot(const FluxModel& model, const State& ref,
                                           const ContinuationOptions& opts,
                                           const Tolerances& tol) {
  std::vector<HugoniotBranch> out;
  for (const auto& s : hugoniot_starts(model, ref, opts, tol))
    out.push_back(trace_branch(model, ref, s, opts, tol));
  return out;
}

HugoniotBranch continue_hugoniot(const FluxModel& model, const State& ref, const State& from,
                                 const Vec2& direction, const ContinuationOptions& opts,
                                 const Tolerances& tol) {
  HugoniotBranch branch;
  branch.reference = ref;
  branch.start_direction = direction.normalized();
  const double s0 = shock_speed(model, ref, from).sigma;
  const Constraint con{branch.start_direction, branch.start_direction.dot(from.vec())};
  auto first = correct(model, ref, from, s0, con, branch.start_direction, opts);
  if (!first) throw NewtonDivergence("corrector failed at the continuation start");
  first->state = snap_to_domain(first->state, tol.eps_dom);
  branch.push_back(*first);
  run_continuation(model, branch, opts, tol);
  classify_branch(model, branch, Orientation::forward, tol);
  return branch;
}

std::optional<LocusPoint> locus_point_at(const FluxModel& model, const HugoniotBranch& branch,
                                         std::size_t i, double tau,
                                         const ContinuationOptions& opts) {
  const LocusPoint base = branch.at(i);
  if (tau == 0.0) return base;
  const State pred = base.state + tau * base.tangent;
  const Constraint con{base.tangent, base.tangent.dot(pred.vec())};
  return correct(model, branch.reference, pred, base.sigma + tau * base.dsigma_ds, con,
                 base.tangent, opts);
}

HugoniotBranch truncate_branch(const HugoniotBranch& branch, std::size_t i, const LocusPoint& p) {
  HugoniotBranch out;
  out.reference = branch.reference;
  out.start_direction = branch.start_direction;
  out.start_family = branch.start_family;
  out.stop = branch.stop;
  for (std::size_t k = 0; k <= i && k < branch.size(); ++k) out.push_back(branch.at(k));
  if (distance(out.points.back(), p.state) > 1e-15) out.push_back(p);
  if (!branch.lax_classes.empty()) {
    out.lax_classes.assign(branch.lax_classes.begin(),
                           branch.lax_classes.begin() +
                               static_cast<std::ptrdiff_t>(std::min(i + 1, branch.lax_classes.size())));
    while (out.lax_classes.size() < out.size()) out.lax_classes.push_back(out.lax_classes.back());
  }
  return out;
}

LaxClass lax_classify(const FluxModel& model, const State& ref, const State& u, double sigma,
                      Orientation orientation, const Tolerances& tol) {
  const State& left = orientation == Orientation::forward ? ref : u;
  const State& right = orientation == Orientation::forward ? u : ref;
  const CharField cl = eigen_fields(model, left, tol);
  const CharField cr = eigen_fields(model, right, tol);
  const double eps = tol.eps_eq;
  enum Cmp { less, equal, greater };
  const auto cmp = [eps](double x, double y) {
    if (std::abs(x - y) <= eps) return equal;
    return x < y ? less : greater;
  };

  if (cmp(cr.lambda_f, sigma) == less && cmp(sigma, cl.lambda_s) == less)
    return {LaxTag::overcompressive, std::nullopt};

  struct Ineq {
    Cmp c;
    LaxTag side;
    Family fam;
  };
  const auto evaluate = [](const std::array<Ineq, 3>& q, LaxTag strict,
                           std::optional<LaxClass>& out) {
    int equalities = 0;
    const Ineq* eq = nullptr;
    for (const auto& i : q) {
      if (i.c == greater) return;
      if (i.c == equal) {
        ++equalities;
        eq = &i;
      }
    }
    if (equalities == 0)
      out = LaxClass{strict, std::nullopt};
    else if (equalities == 1)
      out = LaxClass{eq->side, eq->fam};
  };

  std::optional<LaxClass> result;
  evaluate({Ineq{cmp(cr.lambda_s, sigma), LaxTag::characteristic_right, Family::slow},
            Ineq{cmp(sigma, cl.lambda_s), LaxTag::characteristic_left, Family::slow},
            Ineq{cmp(sigma, cr.lambda_f), LaxTag::characteristic_right, Family::fast}},
           LaxTag::slow_shock, result);
  if (result && result->tag == LaxTag::slow_shock) return *result;
  std::optional<LaxClass> fast;
  evaluate({Ineq{cmp(cr.lambda_f, sigma), LaxTag::characteristic_right, Family::fast},
            Ineq{cmp(sigma, cl.lambda_f), LaxTag::characteristic_left, Family::fast},
            Ineq{cmp(cl.lambda_s, sigma), LaxTag::characteristic_left, Family::slow}},
           LaxTag::fast_shock, fast);
  if (fast && fast->tag == LaxTag::fast_shock) return *fast;
  if (result) return *result;
  if (fast) return *fast;
  return {LaxTag::undercompressive, std::nullopt};
}

void classify_branch(const FluxModel& model, HugoniotBranch& branch, Orientation orientation,
                     const Tolerances& tol) {
  branch.lax_classes.clear();
  for (std::size_t i = 0; i < branch.size(); ++i) {
    try {
      branch.lax_classes.push_back(
          lax_classify(model, branch.reference, branch.points[i], branch.sigmas[i], orientation, tol));
    } catch (const HyperbolicityLoss&) {
      branch.lax_classes.push_back({LaxTag::undercompressive, std::nullopt});
    }
  }
}

HugoniotBranch liu_trim(const FluxModel& model, const HugoniotBranch& branch,
                        Orientation orientation, const ContinuationOptions& opts,
                        const Tolerances& tol) {
  if (branch.size() < 2) return branch;
  // Forward: sigma may not rise above any earlier value; backward: may not drop.
  const double sgn = orientation == Orientation::forward ? 1.0 : -1.0;
  std::size_t best = 0;
  std::size_t violation = branch.size();
  for (std::size_t i = 1; i < branch.size(); ++i) {
    const double v = sgn * branch.sigmas[i];
    const double extreme = sgn * branch.sigmas[best];
    if (v > extreme + tol.eps_eq) {
      violation = i;
      break;
    }
    if (v < extreme) best = i;
  }
  if (violation == branch.size()) return branch;
  if (best == 0) return truncate_branch(branch, 0, branch.at(0));

  // Refine the extremum of sigma by bisection on d(sigma)/ds.
  const std::size_t j0 = best - 1;
  const std::size_t j1 = std::min(best + 1, branch.size() - 1);
  const LocusPoint base = branch.at(j0);
  const double tau_end = base.tangent.dot(branch.points[j1] - base.state);
  const double tau_mid = base.tangent.dot(branch.points[best] - base.state);
  const auto slope = [&](double tau) -> std::optional<double> {
    auto p = locus_point_at(model, branch, j0, tau, opts);
    if (!p) return std::nullopt;
    return sgn * p->dsigma_ds;
  };
  auto sa = slope(0.0);
  auto sb = slope(tau_end);
  if (!sa || !sb || (*sa < 0.0) == (*sb < 0.0))
    return truncate_branch(branch, best, branch.at(best));
  double a = 0.0, b = tau_end;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    auto sm = slope(m);
    if (!sm) break;
    if ((*sm < 0.0) == (*sa < 0.0))
      a = m;
    else
      b = m;
  }
  const double tau = 0.5 * (a + b);
  auto p = locus_point_at(model, branch, j0, tau, opts);
  if (!p) return truncate_branch(branch, best, branch.at(best));
  return truncate_branch(branch, tau < tau_mid ? j0 : best, *p);
}

std::vector<BetheWendroffPoint> find_bethe_wendroff(const FluxModel& model,
                                                    const HugoniotBranch& branch,
                                                    const ContinuationOptions& opts,
                                                    const Tolerances& tol, double max_angle) {
  std::vector<BetheWendroffPoint> out;
  if (branch.size() < 2) return out;
  std::vector<CharField> fields;
  fields.reserve(branch.size());
  for (const auto& p : branch.points) fields.push_back(eigen_fields(model, p, tol));

  for (Family k : {Family::slow, Family::fast}) {
    const auto g_at = [&](std::size_t i) { return branch.sigmas[i] - fields[i].lambda(k); };
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
      const double g0 = g_at(i);
      const double g1 = g_at(i + 1);
      if (g0 == 0.0 || !((g0 < 0.0) != (g1 < 0.0) || g1 == 0.0)) continue;
      const LocusPoint base = branch.at(i);
      double a = 0.0;
      double b = base.tangent.dot(branch.points[i + 1] - base.state);
      std::optional<LocusPoint> root = branch.at(i + 1);
      double groot = g1;
      double ga = g0;
      for (int it = 0; it < 200 && std::abs(groot) > 1e-12 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        auto p = locus_point_at(model, branch, i, m, opts);
        if (!p) break;
        const double gm = p->sigma - eigen_fields(model, p->state, tol).lambda(k);
        root = p;
        groot = gm;
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const CharField cf = eigen_fields(model, root->state, tol);
      const double ang = std::asin(std::min(1.0, std::abs(cross(root->tangent, cf.r(k)))));
      if (ang > max_angle) continue;
      BetheWendroffPoint bw;
      bw.point = *root;
      bw.family = k;
      bw.lambda = cf.lambda(k);
      bw.segment = i;
      bw.arclength = branch.arclength[i] + distance(branch.points[i], root->state);
      bw.tangent_angle = ang;
      out.push_back(bw);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.arclength < y.arclength; });
  return out;
}

}  // namespace rieff
