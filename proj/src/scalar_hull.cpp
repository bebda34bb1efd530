#include "rieff/scalar_hull.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rieff {

namespace {

double tangency_residual(const SampledFlux& f, double anchor, double f_anchor, double x) {
  return f.derivative(x) * (x - anchor) - (f.value(x) - f_anchor);
}

// Bisection for a sign change of the tangency residual on [a, b].
std::optional<double> bisect_tangency(const SampledFlux& f, double anchor, double a, double b) {
  const double fa_anchor = f.value(anchor);
  double ta = tangency_residual(f, anchor, fa_anchor, a);
  const double tb = tangency_residual(f, anchor, fa_anchor, b);
  if (ta == 0.0) return a;
  if (tb == 0.0) return b;
  if ((ta < 0.0) == (tb < 0.0)) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= std::min(a, b) || m >= std::max(a, b)) break;
    const double tm = tangency_residual(f, anchor, fa_anchor, m);
    if (tm == 0.0) return m;
    if ((tm < 0.0) == (ta < 0.0)) {
      a = m;
      ta = tm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct RawWave {
  PieceKind kind;
  double xl, xr;
  std::size_t il, ir;  // indices into the hull point list
};

std::vector<ScalarWave> lower_hull(const SampledFlux& g, double a, double b) {
  std::vector<double> x{a};
  for (double n : g.nodes())
    if (n > a + 1e-12 && n < b - 1e-12) x.push_back(n);
  x.push_back(b);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = g.value(x[i]);

  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t p = h[h.size() - 2], q = h.back();
      const double cross = (x[q] - x[p]) * (y[i] - y[p]) - (y[q] - y[p]) * (x[i] - x[p]);
      if (cross <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }

  std::vector<RawWave> raw;
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    const std::size_t ia = h[j], ib = h[j + 1];
    const double s = (y[ib] - y[ia]) / (x[ib] - x[ia]);
    const double tol = 1e-9 * (1.0 + std::abs(s));
    const bool contact = ib == ia + 1 && g.derivative(x[ia]) <= s + tol && s <= g.derivative(x[ib]) + tol;
    const PieceKind kind = contact ? PieceKind::rarefaction : PieceKind::shock;
    if (!raw.empty() && kind == PieceKind::rarefaction && raw.back().kind == PieceKind::rarefaction) {
      raw.back().xr = x[ib];
      raw.back().ir = ib;
    } else {
      raw.push_back({kind, x[ia], x[ib], ia, ib});
    }
  }

  // Contact points of chords move from the grid to the tangency root.
  const std::size_t last = x.size() - 1;
  for (auto& w : raw) {
    if (w.kind != PieceKind::shock) continue;
    const bool left_free = w.il != 0;
    const bool right_free = w.ir != last;
    const auto bracket = [&](std::size_t i) {
      return std::pair{x[i == 0 ? 0 : i - 1], x[std::min(i + 1, last)]};
    };
    for (int it = 0; it < (left_free && right_free ? 60 : 1); ++it) {
      const double old_l = w.xl, old_r = w.xr;
      if (right_free) {
        auto [lo, hi] = bracket(w.ir);
        lo = std::max(lo, w.xl + 1e-14);
        if (auto r = bisect_tangency(g, w.xl, lo, hi)) w.xr = *r;
      }
      if (left_free) {
        auto [lo, hi] = bracket(w.il);
        hi = std::min(hi, w.xr - 1e-14);
        if (auto r = bisect_tangency(g, w.xr, lo, hi)) w.xl = *r;
      }
      if (std::abs(w.xl - old_l) + std::abs(w.xr - old_r) < 1e-15) break;
    }
  }
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j].kind != PieceKind::rarefaction) continue;
    if (j > 0) raw[j].xl = raw[j - 1].xr;
    if (j + 1 < raw.size()) raw[j].xr = raw[j + 1].xl;
  }

  std::vector<ScalarWave> out;
  for (const auto& w : raw) {
    if (!(w.xr > w.xl)) continue;
    ScalarWave s;
    s.kind = w.kind;
    s.ell_left = w.xl;
    s.ell_right = w.xr;
    if (w.kind == PieceKind::shock) {
      s.speed_left = s.speed_right = (g.value(w.xr) - g.value(w.xl)) / (w.xr - w.xl);
    } else {
      s.speed_left = g.derivative(w.xl);
      s.speed_right = g.derivative(w.xr);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

double welge_point(const SampledFlux& f, double ell_r, double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("empty Welge search interval");
  const bool from_lo = std::abs(ell_r - lo) <= std::abs(ell_r - hi);
  const double far = from_lo ? hi : lo;
  const double f_r = f.value(ell_r);
  double fmax = 1.0;
  for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
  const double floor = 1e-13 * fmax;

  std::vector<double> xs;
  for (double n : f.nodes())
    if (n > lo + 1e-12 && n < hi - 1e-12) xs.push_back(n);
  if (!from_lo) std::reverse(xs.begin(), xs.end());
  xs.push_back(far);

  int sign0 = 0;
  double prev = ell_r;
  for (double x : xs) {
    const double t = tangency_residual(f, ell_r, f_r, x);
    if (std::abs(t) <= floor) continue;
    const int s = t < 0.0 ? -1 : 1;
    if (sign0 == 0) {
      sign0 = s;
    } else if (s != sign0) {
      if (auto r = bisect_tangency(f, ell_r, std::min(prev, x), std::max(prev, x))) return *r;
    }
    prev = x;
  }
  throw NoTangency("tangency residual keeps one sign on the search interval");
}

double welge_point(const EffectiveFlux& eff, double ell_r, double lo, double hi) {
  return welge_point(eff.interpolant(), ell_r, lo, hi);
}

std::vector<ScalarWave> hull_solution(const SampledFlux& f, double ell_l, double ell_r) {
  if (std::abs(ell_l - ell_r) <= 1e-14) return {};
  if (ell_l < ell_r) return lower_hull(f, ell_l, ell_r);

  // Upper concave hull of f is the lower convex hull of g(v) = -f(-v).
  std::vector<double> v, gv, gp;
  for (std::size_t i = 0; i < f.size(); ++i) {
    v.push_back(-f.nodes()[i]);
    gv.push_back(-f.values()[i]);
    gp.push_back(f.slopes()[i]);
  }
  const SampledFlux g(std::move(v), std::move(gv), std::move(gp));
  auto waves = lower_hull(g, -ell_l, -ell_r);
  for (auto& w : waves) {
    w.ell_left = -w.ell_left;
    w.ell_right = -w.ell_right;
  }
  return waves;
}

std::vector<ScalarWave> hull_solution(const EffectiveFlux& eff, double ell_l, double ell_r) {
  return hull_solution(eff.interpolant(), ell_l, ell_r);
}

CoreyWelge corey_welge_closed_form(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw ParameterError("Corey coefficients must be positive");
  const double d = a + b;
  CoreyWelge w;
  w.l1 = 1.0 - std::sqrt(c / (a + c));
  w.l2 = 1.0 - std::sqrt(c / (b + c));
  w.l3 = 1.0 - std::sqrt(c * d / (a * b + c * d));
  w.ordered = w.l3 < std::min(w.l1, w.l2);
  return w;
}

}  // namespace rieff
