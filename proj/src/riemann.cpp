#include "rieff/riemann.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace rieff {

std::vector<State> WaveCurve::samples() const {
  std::vector<State> out{origin};
  for (const auto& b : branches)
    for (std::size_t i = 1; i < b->samples.size(); ++i)
      if (distance(b->samples[i].state, out.back()) > 0.0) out.push_back(b->samples[i].state);
  return out;
}

namespace {

// Number of leading samples of the concatenated group along which l is
// strictly monotone.
std::size_t monotone_prefix(const WaveGroup& g, const ParamCoordinate& c, std::size_t* total) {
  std::vector<double> ell{project_coord(c, g.reference)};
  for (const auto& p : g.pieces)
    for (std::size_t i = 1; i < p.points.size(); ++i) ell.push_back(project_coord(c, p.points[i]));
  if (total) *total = ell.size();
  if (ell.size() < 2) return ell.size();
  const bool inc = ell[1] > ell[0];
  std::size_t n = 1;
  while (n < ell.size() && (inc ? ell[n] > ell[n - 1] : ell[n] < ell[n - 1])) ++n;
  return n;
}

void truncate_group(WaveGroup& g, std::size_t keep) {
  std::size_t seen = 1;
  for (std::size_t k = 0; k < g.pieces.size(); ++k) {
    auto& p = g.pieces[k];
    const std::size_t extra = p.points.size() - 1;
    if (seen + extra >= keep) {
      const std::size_t n = keep - seen + 1;
      if (n < 2) {
        g.pieces.resize(k);
      } else {
        p.points.resize(n);
        p.tangents.resize(n);
        p.speeds.resize(n);
        p.rates.resize(n);
        p.segment.reset();
        g.pieces.resize(k + 1);
      }
      g.transitions.resize(g.pieces.empty() ? 0 : g.pieces.size() - 1);
      g.end = WaveGroup::End::locus_end;
      return;
    }
    seen += extra;
  }
}

}  // namespace

ParamCoordinate choose_coordinate(WaveGroup& group) {
  std::vector<ParamCoordinate> cands{ParamCoordinate::u3(), ParamCoordinate::u1(),
                                     ParamCoordinate::u2()};
  for (int k = 0; k < 48; ++k) {
    const double th = k * std::numbers::pi / 24.0;
    cands.push_back({0.0, std::cos(th), std::sin(th)});
  }
  ParamCoordinate best = cands.front();
  std::size_t best_n = 0, total = 0;
  for (const auto& c : cands) {
    const std::size_t n = monotone_prefix(group, c, &total);
    if (n == total) return c;
    if (n > best_n) {
      best_n = n;
      best = c;
    }
  }
  truncate_group(group, best_n);
  return best;
}

WaveCurve wave_curve(const FluxModel& model, const State& u0, Family family,
                     Orientation orientation, const WaveCurveOptions& opts,
                     const Tolerances& tol) {
  WaveCurve curve;
  curve.origin = u0;
  curve.family = family;
  curve.orientation = orientation;

  WaveCurveOptions o0 = opts;
  o0.eff.stop_off_locus = true;
  std::vector<WaveGroup> groups;
  const CharField cf = eigen_fields(model, u0, tol);
  if (!cf.degenerate) {
    groups.push_back(trace_wave_group(model, u0, family, orientation, o0.eff, tol));
    EffOptions other = o0.eff;
    other.start_direction = -groups.front().direction;
    groups.push_back(trace_wave_group(model, u0, family, orientation, other, tol));
  } else {
    for (const auto& s : hugoniot_starts(model, u0, opts.eff.continuation, tol)) {
      if (!s.family || *s.family != family) continue;
      EffOptions o = o0.eff;
      o.start_direction = s.direction;
      groups.push_back(trace_wave_group(model, u0, family, orientation, o, tol));
    }
  }
  for (auto& g : groups) {
    if (g.pieces.empty()) continue;
    const ParamCoordinate c = opts.coord ? *opts.coord : choose_coordinate(g);
    if (g.pieces.empty()) continue;
    curve.branches.push_back(
        std::make_shared<const EffectiveFlux>(lift_wave_group(model, std::move(g), c, opts.eff, tol)));
  }
  return curve;
}

namespace {

double golden_min(const EffectiveFlux& eff, const State& u, double a, double b, double* best_d) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  const auto d2 = [&](double l) { return (eff.state_at(l) - u).squaredNorm(); };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = d2(c), fd = d2(d);
  for (int it = 0; it < 120 && std::abs(b - a) > 1e-16; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = d2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = d2(d);
    }
  }
  double l = 0.5 * (a + b);
  double dl = d2(l);
  for (double e : {a, b}) {
    const double de = d2(e);
    if (de < dl) {
      dl = de;
      l = e;
    }
  }
  *best_d = std::sqrt(dl);
  return l;
}

}  // namespace

std::optional<CurveLocation> locate_on_curve(const WaveCurve& curve, const State& u, double tol) {
  if (distance(curve.origin, u) <= tol && !curve.branches.empty())
    return CurveLocation{0, curve.branches.front()->ell_reference, curve.origin, distance(curve.origin, u)};
  std::optional<CurveLocation> best;
  for (std::size_t b = 0; b < curve.branches.size(); ++b) {
    const auto& s = curve.branches[b]->samples;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const Vec2 seg = s[i + 1].state - s[i].state;
      const double len2 = seg.squaredNorm();
      if (len2 == 0.0) continue;
      const double t = std::clamp((u - s[i].state).dot(seg) / len2, 0.0, 1.0);
      const double lin = (s[i].state + t * seg - u).norm();
      if (lin > 1e-4) continue;
      double d = 0.0;
      const double l = golden_min(*curve.branches[b], u, s[i].ell, s[i + 1].ell, &d);
      if (!best || d < best->distance) best = CurveLocation{b, l, curve.branches[b]->state_at(l), d};
    }
  }
  if (best && best->distance <= tol) return best;
  return std::nullopt;
}

std::vector<Wave> wave_group(const WaveCurve& curve, std::size_t branch, double ell) {
  const auto& eff = curve.branches.at(branch);
  const double l0 = eff->ell_reference;
  const bool forward = curve.orientation == Orientation::forward;
  const auto scalar = forward ? hull_solution(*eff, l0, ell) : hull_solution(*eff, ell, l0);
  const auto state = [&](double l) {
    if (std::abs(l - l0) <= 1e-14) return curve.origin;
    return eff->state_at(l);
  };
  std::vector<Wave> out;
  for (const auto& w : scalar) {
    Wave v;
    v.kind = w.kind;
    v.family = curve.family;
    v.ell_left = w.ell_left;
    v.ell_right = w.ell_right;
    v.left = state(w.ell_left);
    v.right = state(w.ell_right);
    v.speed_left = w.speed_left;
    v.speed_right = w.speed_right;
    v.eff = eff;
    out.push_back(v);
  }
  return out;
}

namespace {

struct Hit {
  std::size_t bs, bf;
  double ls, lf;
  State u;
};

Vec2 state_derivative(const EffectiveFlux& eff, double l) {
  const double h = 1e-7;
  const double lo = eff.ell_min(), hi = eff.ell_max();
  const double a = std::max(lo, l - h), b = std::min(hi, l + h);
  if (b <= a) return Vec2::Zero();
  return (eff.state_at(b) - eff.state_at(a)) / (b - a);
}

std::optional<Hit> refine_crossing(const EffectiveFlux& es, const EffectiveFlux& ef, double ls,
                                   double lf) {
  for (int it = 0; it < 40; ++it) {
    const Vec2 r = es.state_at(ls) - ef.state_at(lf);
    if (r.norm() <= 1e-13) break;
    Mat2 j;
    j.col(0) = state_derivative(es, ls);
    j.col(1) = -state_derivative(ef, lf);
    if (std::abs(j.determinant()) < 1e-300) return std::nullopt;
    const Vec2 d = j.fullPivLu().solve(-r);
    ls = std::clamp(ls + d.x(), es.ell_min(), es.ell_max());
    lf = std::clamp(lf + d.y(), ef.ell_min(), ef.ell_max());
  }
  const State u = es.state_at(ls);
  if ((u - ef.state_at(lf)).norm() > 1e-9) return std::nullopt;
  return Hit{0, 0, ls, lf, u};
}

std::vector<Hit> intersect(const WaveCurve& sc, const WaveCurve& fc) {
  std::vector<Hit> hits;
  for (std::size_t bs = 0; bs < sc.branches.size(); ++bs) {
    const auto& a = sc.branches[bs]->samples;
    for (std::size_t bf = 0; bf < fc.branches.size(); ++bf) {
      const auto& b = fc.branches[bf]->samples;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const Vec2 p = a[i].state.vec(), pr = a[i + 1].state.vec() - p;
        if (pr.squaredNorm() == 0.0) continue;
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
          const Vec2 q = b[j].state.vec(), qs = b[j + 1].state.vec() - q;
          if (qs.squaredNorm() == 0.0) continue;
          const double den = pr.x() * qs.y() - pr.y() * qs.x();
          if (std::abs(den) < 1e-300) continue;
          const Vec2 w = q - p;
          const double t = (w.x() * qs.y() - w.y() * qs.x()) / den;
          const double s = (w.x() * pr.y() - w.y() * pr.x()) / den;
          if (t < -1e-12 || t > 1 + 1e-12 || s < -1e-12 || s > 1 + 1e-12) continue;
          const double ls = a[i].ell + t * (a[i + 1].ell - a[i].ell);
          const double lf = b[j].ell + s * (b[j + 1].ell - b[j].ell);
          auto h = refine_crossing(*sc.branches[bs], *fc.branches[bf], ls, lf);
          if (!h) continue;
          h->bs = bs;
          h->bf = bf;
          const bool dup = std::any_of(hits.begin(), hits.end(),
                                       [&](const Hit& o) { return distance(o.u, h->u) < 1e-8; });
          if (!dup) hits.push_back(*h);
        }
      }
    }
  }
  return hits;
}

bool ordered(const std::vector<Wave>& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].speed_right < g[i].speed_left - 1e-9) return false;
    if (i > 0 && g[i].speed_left < g[i - 1].speed_right - 1e-9) return false;
  }
  return true;
}

}  // namespace

RiemannSolution solve_riemann(const FluxModel& model, const State& ul, const State& ur,
                              const WaveCurveOptions& opts, const Tolerances& tol) {
  if (!in_domain(ul, tol.eps_dom) || !in_domain(ur, tol.eps_dom))
    throw DomainError("Riemann data outside the triangle");
  RiemannSolution sol;
  sol.left = ul;
  sol.right = ur;
  sol.middle = ul;
  if (distance(ul, ur) <= 1e-14) return sol;

  const WaveCurve sc = wave_curve(model, ul, Family::slow, Orientation::forward, opts, tol);
  if (auto loc = locate_on_curve(sc, ur)) {
    sol.middle = ur;
    sol.slow_group = wave_group(sc, loc->branch, loc->ell);
  } else {
    const WaveCurve fc = wave_curve(model, ur, Family::fast, Orientation::backward, opts, tol);
    if (auto loc2 = locate_on_curve(fc, ul)) {
      sol.middle = ul;
      sol.fast_group = wave_group(fc, loc2->branch, loc2->ell);
    } else {
      const auto hits = intersect(sc, fc);
      if (hits.empty())
        throw NoIntersection("slow wave curve from UL and fast wave curve from UR do not cross");
      const Hit* best = nullptr;
      double best_tv = std::numeric_limits<double>::infinity();
      for (const auto& h : hits) {
        sol.candidates.push_back(h.u);
        const double tv = distance(h.u, ul) + distance(ur, h.u);
        if (tv < best_tv) {
          best_tv = tv;
          best = &h;
        }
      }
      sol.multiple = hits.size() > 1;
      sol.middle = best->u;
      sol.slow_group = wave_group(sc, best->bs, best->ls);
      sol.fast_group = wave_group(fc, best->bf, best->lf);
    }
  }
  if (sol.candidates.empty()) sol.candidates.push_back(sol.middle);

  sol.valid = ordered(sol.slow_group) && ordered(sol.fast_group);
  if (!sol.slow_group.empty() && !sol.fast_group.empty())
    sol.valid = sol.valid && sol.slow_group.back().speed_right <= sol.fast_group.front().speed_left + 1e-9;
  return sol;
}

std::vector<State> sample_profile(const RiemannSolution& sol, const std::vector<double>& xi) {
  std::vector<const Wave*> waves;
  for (const auto& w : sol.slow_group) waves.push_back(&w);
  for (const auto& w : sol.fast_group) waves.push_back(&w);
  std::map<const EffectiveFlux*, SampledFlux> flux;
  for (const auto* w : waves)
    if (w->kind == PieceKind::rarefaction && w->eff && !flux.count(w->eff.get()))
      flux.emplace(w->eff.get(), w->eff->interpolant());

  std::vector<State> out;
  out.reserve(xi.size());
  for (double x : xi) {
    State u = sol.left;
    bool done = false;
    for (const auto* w : waves) {
      if (w->kind == PieceKind::shock) {
        if (x <= w->speed_left) {
          done = true;
          break;
        }
        u = w->right;
        continue;
      }
      if (x < w->speed_left) {
        done = true;
        break;
      }
      if (x <= w->speed_right) {
        const SampledFlux& f = flux.at(w->eff.get());
        double a = w->ell_left, b = w->ell_right;
        const double da = f.derivative(a) - x;
        for (int it = 0; it < 200 && a != b; ++it) {
          const double m = 0.5 * (a + b);
          if (m == a || m == b) break;
          if ((f.derivative(m) - x < 0.0) == (da < 0.0))
            a = m;
          else
            b = m;
        }
        u = w->eff->state_at(0.5 * (a + b));
        done = true;
        break;
      }
      u = w->right;
    }
    out.push_back(done ? u : sol.right);
  }
  return out;
}

}  // namespace rieff
