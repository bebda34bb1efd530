#include "rieff/acceptance.hpp"

#include "rieff/eff.hpp"
#include "rieff/flux_model.hpp"
#include "rieff/fvm.hpp"
#include "rieff/hugoniot.hpp"
#include "rieff/rarefaction.hpp"
#include "rieff/riemann.hpp"
#include "rieff/scalar_hull.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

namespace rieff {

std::uint64_t seed_from_env() {
  constexpr std::uint64_t fallback = 20161017;
  const char* s = std::getenv("RIEFF_SEED");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  return (end && *end == '\0') ? v : fallback;
}

namespace {

std::string sci(double v) {
  std::ostringstream o;
  o.precision(3);
  o << std::scientific << v;
  return o.str();
}

// Records the worst value of a quantity against its bound.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (!(v <= value)) {  // also catches NaN
      value = v;
      where = w;
    }
  }
};

std::string at(const State& u) {
  std::ostringstream o;
  o.precision(6);
  o << "(" << u.u1 << "," << u.u2 << ")";
  return o.str();
}

// The three base curves through O of the quadratic model.
EffectiveFlux separatrix_eff(const CoreyModel& m) {
  EffOptions o;
  o.start_direction = Vec2(m.B(), m.A()).normalized();
  return build_eff(m, {0.0, 0.0}, Family::slow, Orientation::backward, ParamCoordinate::u3(), o);
}

EffectiveFlux edge_eff(const CoreyModel& m, int edge) {
  EffOptions o;
  o.start_direction = edge == 1 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  return build_eff(m, {0.0, 0.0}, Family::fast, Orientation::backward, ParamCoordinate::u3(), o);
}

EffectiveFlux hyperbola_eff(const CoreyModel& m, double mm) {
  return build_eff(m, {mm, 0.0}, Family::slow, Orientation::backward, ParamCoordinate::u2());
}

CriterionResult welge_closed_forms(const AcceptanceConfig& cfg, bool ordering_only) {
  CriterionResult r;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(0.2, 5.0);
  Worst err;
  double min_margin = 1e300;
  std::string min_where;
  for (int i = 0; i < cfg.welge_triples; ++i) {
    const double A = coef(rng), B = coef(rng), C = coef(rng);
    std::ostringstream tag;
    tag.precision(4);
    tag << "ABC=(" << A << "," << B << "," << C << ")";
    const CoreyModel m(A, B, C);
    const CoreyWelge cf = corey_welge_closed_form(A, B, C);
    const double l3 = welge_point(separatrix_eff(m), 1.0, 0.0, 1.0);
    const double l1 = welge_point(edge_eff(m, 1), 1.0, 0.0, 1.0);
    const double l2 = welge_point(edge_eff(m, 2), 1.0, 0.0, 1.0);
    err.update(std::abs(l3 - cf.l3), tag.str() + " l3");
    err.update(std::abs(l1 - cf.l1), tag.str() + " l1");
    err.update(std::abs(l2 - cf.l2), tag.str() + " l2");
    for (double mg : {cf.l1 - cf.l3, cf.l2 - cf.l3, l1 - l3, l2 - l3})
      if (mg < min_margin) {
        min_margin = mg;
        min_where = tag.str();
      }
  }
  if (ordering_only) {
    r.pass = min_margin > 0.0;
    r.detail = "min margin " + sci(min_margin) + " at " + min_where;
  } else {
    r.pass = err.value <= 1e-7;
    r.detail = "max |l* - closed form| " + sci(err.value) + " (" + err.where + "), bound 1e-7";
  }
  return r;
}

CriterionResult lifting_identity() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  Worst shock, raref;
  int ns = 0, nr = 0;
  for (auto [name, eff] : {std::pair{"separatrix", separatrix_eff(m)},
                           std::pair{"hyperbola m=0.7", hyperbola_eff(m, 0.7)}}) {
    const double total = lifting_identity_error(m, eff);
    for (std::size_t i = 0; i < eff.pieces.size(); ++i) {
      const auto& p = eff.pieces[i];
      const std::string w = std::string(name) + " piece " + std::to_string(i);
      if (p.kind == PieceKind::shock) {
        shock.update(p.lifting_error, w);
        ++ns;
      } else {
        raref.update(p.lifting_error, w);
        ++nr;
      }
    }
    if (total > std::max(shock.value, raref.value)) raref.update(total, std::string(name) + " total");
  }
  r.pass = ns > 0 && nr > 0 && shock.value <= 1e-10 && raref.value <= 1e-6;
  r.detail = "shock " + sci(shock.value) + " (" + std::to_string(ns) + " pieces, bound 1e-10), rarefaction " +
             sci(raref.value) + " (" + std::to_string(nr) + " pieces, bound 1e-6)";
  return r;
}

CriterionResult hugoniot_hyperbola() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  const double A = 1, B = 1, C = 1;
  Worst res, gam;
  std::size_t points = 0, compared = 0;
  for (double mm : {0.3, 0.5, 0.7}) {
    const double fR = eval_flux(m, {mm, 0.0}).f1;
    const double a = A - (A + C) * fR;
    for (const auto& br : trace_hugoniot(m, {mm, 0.0})) {
      if (std::abs(br.start_direction.y()) < 1e-6) continue;  // the edge itself
      // The formula is the sheet 2 a u1 + b = +sqrt(disc). The trace leaves it
      // at the fold, where u2 stops increasing; past a = 0 its root is at infinity.
      bool on_sheet = true;
      for (std::size_t i = 0; i < br.size(); ++i) {
        const double u1 = br.points[i].u1, u2 = br.points[i].u2;
        const double q = (A - A * fR - C * fR) * u1 * u1 - (B + 2 * C * fR) * u1 * u2 -
                         (B + C) * fR * u2 * u2 + 2 * C * fR * u1 + (2 * C * fR + B * mm) * u2 - C * fR;
        res.update(std::abs(q), "m=" + std::to_string(mm) + " " + at(br.points[i]));
        ++points;
        const double b = 2 * C * fR - (B + 2 * C * fR) * u2;
        const double c = -(B + C) * fR * u2 * u2 + (2 * C * fR + B * mm) * u2 - C * fR;
        if (!(2 * a * u1 + b > 0.0)) on_sheet = false;
        if (!on_sheet) continue;
        const double disc = std::max(0.0, b * b - 4 * a * c);
        // rationalized form of (-b + sqrt(disc)) / 2a, stable when a is small
        const double g1 = 2 * c / (-b - std::sqrt(disc));
        gam.update(std::abs(g1 - u1), "m=" + std::to_string(mm) + " " + at(br.points[i]));
        ++compared;
      }
    }
  }
  r.pass = points > 0 && compared > 0 && res.value <= 1e-8 && gam.value <= 1e-7;
  r.detail = "quadratic residual " + sci(res.value) + " over " + std::to_string(points) +
             " points (bound 1e-8), |gamma1 - u1| " + sci(gam.value) + " over " +
             std::to_string(compared) + " (bound 1e-7)";
  return r;
}

CriterionResult bethe_wendroff() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  Worst gap;
  int found = 0;
  bool sep_slow = false, edges_fast = true;
  int edges = 0;
  for (const auto& br : trace_hugoniot(m, {0.0, 0.0})) {
    const Vec2 d = br.start_direction;
    const bool sep = d.x() > 1e-3 && d.y() > 1e-3;
    for (const auto& bw : find_bethe_wendroff(m, br)) {
      ++found;
      const double lam = eigen_fields(m, bw.point.state).lambda(bw.family);
      gap.update(std::abs(shock_speed(m, {0.0, 0.0}, bw.point.state).sigma - lam), "O " + at(bw.point.state));
      if (sep) {
        sep_slow = bw.family == Family::slow;
      } else {
        ++edges;
        edges_fast = edges_fast && bw.family == Family::fast;
      }
    }
  }
  for (double mm : {0.3, 0.5, 0.7}) {
    const State R{mm, 0.0};
    for (const auto& br : trace_hugoniot(m, R))
      for (const auto& bw : find_bethe_wendroff(m, br)) {
        ++found;
        const double lam = eigen_fields(m, bw.point.state).lambda(bw.family);
        gap.update(std::abs(shock_speed(m, R, bw.point.state).sigma - lam), at(R) + " " + at(bw.point.state));
      }
  }
  r.pass = found > 0 && gap.value <= 1e-8 && sep_slow && edges == 2 && edges_fast;
  r.detail = std::to_string(found) + " points, max |sigma - lambda| " + sci(gap.value) +
             " (bound 1e-8); separatrix " + (sep_slow ? "slow" : "NOT slow") + ", edges " +
             (edges == 2 && edges_fast ? "fast" : "NOT both fast");
  return r;
}

CriterionResult eff_smoothness() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  std::vector<std::pair<std::string, EffectiveFlux>> effs;
  effs.emplace_back("separatrix", separatrix_eff(m));
  effs.emplace_back("edge u2=0", edge_eff(m, 1));
  effs.emplace_back("edge u1=0", edge_eff(m, 2));
  for (double mm : {0.3, 0.5, 0.7}) effs.emplace_back("hyperbola m=" + std::to_string(mm), hyperbola_eff(m, mm));
  EffOptions o;
  o.start_direction = Vec2(-1.0, -1.0);
  effs.emplace_back("WAG", build_eff(m, {0.5, 0.5}, Family::slow, Orientation::forward, ParamCoordinate::u3(), o));
  Worst jf, jfp;
  int n = 0;
  for (const auto& [name, eff] : effs)
    for (const auto& b : eff.breakpoints) {
      ++n;
      jf.update(std::abs(b.jump_f), name + " l=" + std::to_string(b.ell));
      jfp.update(std::abs(b.jump_fprime), name + " l=" + std::to_string(b.ell));
    }
  r.pass = n > 0 && jf.value <= 1e-8 && jfp.value <= 1e-6;
  r.detail = std::to_string(n) + " breakpoints, max |df| " + sci(jf.value) + " (bound 1e-8), max |df'| " +
             sci(jfp.value) + " (bound 1e-6)";
  return r;
}

CriterionResult scalar_system() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  const auto sol = solve_riemann(m, {0.5, 0.5}, {0.0, 0.0});
  Worst diff;
  int groups = 0;
  bool shape = true;
  for (const auto* g : {&sol.slow_group, &sol.fast_group}) {
    if (g->empty()) continue;
    ++groups;
    const auto& eff = *g->front().eff;
    const auto hull = hull_solution(eff, g->front().ell_left, g->back().ell_right);
    if (hull.size() != g->size()) {
      shape = false;
      continue;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
      diff.update(std::abs(hull[i].speed_left - (*g)[i].speed_left), "wave " + std::to_string(i));
      diff.update(std::abs(hull[i].speed_right - (*g)[i].speed_right), "wave " + std::to_string(i));
    }
  }

  // independent scalar problem on the separatrix flux written in closed form
  std::vector<double> l, f, fp;
  const double K = 0.5;  // AB/D
  for (int i = 0; i <= 4000; ++i) {
    const double x = i / 4000.0, d = K * (1 - x) * (1 - x) + x * x;
    l.push_back(x);
    f.push_back(x * x / d);
    fp.push_back(2 * K * x * (1 - x) / (d * d));
  }
  const auto oracle = hull_solution(SampledFlux(l, f, fp), 0.0, 1.0);
  const auto& slow = sol.slow_group;
  const bool oracle_shape = oracle.size() == 2 && slow.size() == 2 && sol.fast_group.empty();
  if (oracle_shape)
    for (std::size_t i = 0; i < 2; ++i) {
      diff.update(std::abs(oracle[i].speed_left - slow[i].speed_left), "closed form wave " + std::to_string(i));
      diff.update(std::abs(oracle[i].speed_right - slow[i].speed_right), "closed form wave " + std::to_string(i));
    }
  r.pass = sol.valid && groups > 0 && shape && oracle_shape && diff.value <= 1e-6;
  r.detail = "max speed difference " + sci(diff.value) + " (bound 1e-6), UM " + at(sol.middle) +
             (shape && oracle_shape ? "" : ", wave structure mismatch") + (sol.valid ? "" : ", invalid ordering");
  return r;
}

CriterionResult fvm_cross_check() {
  CriterionResult r;
  const CoreyModel m(1.0, 1.0, 1.0);
  const double t = 0.5;
  bool ok = true;
  std::ostringstream d;
  for (auto [name, ul] : {std::pair{"edge BL", State{1.0, 0.0}}, std::pair{"WAG", State{0.5, 0.5}}}) {
    const State ur{0.0, 0.0};
    const auto sol = solve_riemann(m, ul, ur);
    double prev = 1e300;
    d << name << ":";
    for (int N : {100, 200, 400, 800}) {
      const double e = l1_compare(simulate(m, ul, ur, N, t), sol, t);
      d << " " << sci(e);
      if (!(e < prev)) ok = false;
      prev = e;
    }
    if (!(prev < 0.05)) ok = false;
    d << "; ";
  }
  r.pass = ok;
  r.detail = d.str() + "bound 0.05 at N=800";
  return r;
}

CriterionResult property_suites(const AcceptanceConfig& cfg) {
  CriterionResult r;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto random_state = [&](double margin) {
    for (;;) {
      const double a = uni(rng), b = uni(rng);
      const State u{a, b};
      if (u.u1 >= margin && u.u2 >= margin && u.u3() >= margin) return u;
    }
  };
  const CoreyModel m(1.0, 1.0, 1.0);
  std::uniform_real_distribution<double> coef(0.2, 5.0);

  // Jacobian against central differences
  Worst jac;
  for (int i = 0; i < cfg.jacobian_states; ++i) {
    const CoreyModel mi(coef(rng), coef(rng), coef(rng));
    const State u = random_state(0.0);
    const Mat2 J = mi.jacobian_at(u);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e[c] = h;
      const Vec2 fd = (mi.flux(u + e).vec() - mi.flux(u - e).vec()) / (2 * h);
      jac.update((J.col(c) - fd).cwiseAbs().maxCoeff(), at(u));
    }
  }

  // RH residual on loci; lambda monotonicity on rarefactions
  Worst rh, mono;
  std::size_t loci_points = 0, segments = 0;
  std::vector<State> refs{{0.0, 0.0}, {0.5, 0.5}, {0.3, 0.0}, {0.5, 0.0}, {0.7, 0.0}};
  for (int i = 0; i < cfg.property_states; ++i) refs.push_back(random_state(0.02));
  std::vector<EffectiveFlux> effs;
  for (const State& R : refs) {
    for (const auto& br : trace_hugoniot(m, R))
      for (const State& p : br.points) {
        if (distance(p, R) < 1e-12) continue;
        rh.update(shock_speed(m, R, p).residual, at(R) + "->" + at(p));
        ++loci_points;
      }
    const bool degenerate = R.u1 + R.u2 == 0.0 || (R.u1 == 0.5 && R.u2 == 0.5);
    if (degenerate) continue;
    for (Family k : {Family::slow, Family::fast})
      for (Orientation o : {Orientation::forward, Orientation::backward}) {
        const auto seg = integrate_rarefaction(m, R, k, o);
        ++segments;
        const double sgn = o == Orientation::forward ? 1.0 : -1.0;
        for (std::size_t j = 1; j < seg.lambdas.size(); ++j)
          mono.update(-sgn * (seg.lambdas[j] - seg.lambdas[j - 1]), at(R));
      }
  }

  // hull speed monotonicity on scalar solutions of the base-curve fluxes
  Worst hull;
  std::size_t solutions = 0;
  effs.push_back(separatrix_eff(m));
  effs.push_back(edge_eff(m, 1));
  effs.push_back(hyperbola_eff(m, 0.7));
  for (const auto& eff : effs) {
    const double lo = eff.ell_min(), hi = eff.ell_max();
    for (int j = 0; j < 10; ++j) {
      const double a = lo + (hi - lo) * uni(rng), b = lo + (hi - lo) * uni(rng);
      const auto w = hull_solution(eff, a, b);
      ++solutions;
      for (std::size_t i = 0; i < w.size(); ++i) {
        hull.update(w[i].speed_left - w[i].speed_right, "within wave");
        if (i + 1 < w.size()) hull.update(w[i].speed_right - w[i + 1].speed_left, "between waves");
      }
    }
  }

  r.pass = jac.value <= 1e-6 && rh.value <= 1e-10 && mono.value <= 1e-12 && hull.value <= 1e-9;
  r.detail = "jacobian " + sci(jac.value) + " over " + std::to_string(cfg.jacobian_states) +
             " states; RH " + sci(rh.value) + " over " + std::to_string(loci_points) +
             " points; lambda decrease " + sci(std::max(0.0, mono.value)) + " over " +
             std::to_string(segments) + " segments; hull speed decrease " +
             sci(std::max(0.0, hull.value)) + " over " + std::to_string(solutions) + " solutions";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = std::function<CriterionResult()>;
  const std::vector<std::pair<std::string, Fn>> criteria{
      {"Welge closed forms", [&] { return welge_closed_forms(cfg, false); }},
      {"Welge ordering l3 < l1, l2", [&] { return welge_closed_forms(cfg, true); }},
      {"lifting identity", [] { return lifting_identity(); }},
      {"Hugoniot hyperbola", [] { return hugoniot_hyperbola(); }},
      {"Bethe-Wendroff consistency", [] { return bethe_wendroff(); }},
      {"EFF smoothness", [] { return eff_smoothness(); }},
      {"scalar-system equivalence", [] { return scalar_system(); }},
      {"FVM cross-check", [] { return fvm_cross_check(); }},
      {"property suites", [&] { return property_suites(cfg); }},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("raised ") + e.what();
    }
    r.id = int(i) + 1;
    r.title = criteria[i].first;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.id == 1 && r.seconds >= 5.0) {
      r.pass = false;
      r.detail += "; runtime over 5 s";
    }
    if (r.id == 8 && r.seconds >= 60.0) {
      r.pass = false;
      r.detail += "; runtime over 60 s";
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream o;
  o.precision(2);
  o << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << "  (" << std::fixed << r.seconds
    << " s)  " << r.detail;
  return o.str();
}

}  // namespace rieff
