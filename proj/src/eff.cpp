#include "rieff/eff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rieff {

double project_coord(const ParamCoordinate& c, const State& u) {
  return c.alpha0 + c.alpha1 * u.u1 + c.alpha2 * u.u2;
}

double flux_combination(const ParamCoordinate& c, const Flux& f) {
  return c.alpha0 + c.alpha1 * f.f1 + c.alpha2 * f.f2;
}

std::string_view to_string(PieceKind k) {
  return k == PieceKind::shock ? "shock" : "rarefaction";
}

std::string_view to_string(BreakTag t) {
  return t == BreakTag::bethe_wendroff ? "bethe_wendroff" : "inflection";
}

std::string_view to_string(WaveGroup::End e) {
  switch (e) {
    case WaveGroup::End::boundary: return "boundary";
    case WaveGroup::End::locus_end: return "locus_end";
    case WaveGroup::End::inflection_start: return "inflection_start";
    case WaveGroup::End::off_locus: return "off_locus";
    case WaveGroup::End::hyperbolicity_loss: return "hyperbolicity_loss";
    case WaveGroup::End::max_length: return "max_length";
    case WaveGroup::End::max_pieces: return "max_pieces";
    case WaveGroup::End::no_branch: return "no_branch";
  }
  return "?";
}

namespace {

constexpr double kDuplicate = 1e-12;

void append(BasePiece& p, const State& u, const Vec2& t, double speed, double rate) {
  if (!p.points.empty() && distance(p.points.back(), u) < kDuplicate) {
    if (p.points.size() == 1) return;  // keep the exact start state
    p.points.pop_back();
    p.tangents.pop_back();
    p.speeds.pop_back();
    p.rates.pop_back();
  }
  p.points.push_back(u);
  p.tangents.push_back(t);
  p.speeds.push_back(speed);
  p.rates.push_back(rate);
}

double phi_at(const FluxModel& model, const ParamCoordinate& c, const State& u) {
  return flux_combination(c, model.flux(u));
}

}  // namespace

BasePiece shock_piece(const FluxModel& model, const State& ref, const HugoniotBranch& branch,
                      Family family, bool include_reference) {
  BasePiece p;
  p.kind = PieceKind::shock;
  p.family = family;
  if (include_reference && branch.size() > 0) {
    const Vec2 t = branch.tangents.front();
    const double lam = t.dot(model.jacobian_at(ref) * t);
    append(p, ref, t, lam, branch.dsigma_ds.front());
  }
  for (std::size_t i = 0; i < branch.size(); ++i)
    append(p, branch.points[i], branch.tangents[i], branch.sigmas[i], branch.dsigma_ds[i]);
  return p;
}

BasePiece rarefaction_piece(const FluxModel& model, const RarefactionSegment& seg,
                            const Tolerances& tol) {
  BasePiece p;
  p.kind = PieceKind::rarefaction;
  p.family = seg.family;
  for (std::size_t i = 0; i < seg.size(); ++i)
    append(p, seg.points[i], seg.tangents[i], seg.lambdas[i],
           followed_nonlinearity(model, seg.points[i], seg.tangents[i], tol));
  p.segment = seg;
  return p;
}

double BaseCurve::ell_min() const {
  return ell_values.empty() ? 0.0 : std::min(ell_values.front(), ell_values.back());
}
double BaseCurve::ell_max() const {
  return ell_values.empty() ? 0.0 : std::max(ell_values.front(), ell_values.back());
}

BaseCurve make_base_curve(const State& ref, std::vector<BasePiece> pieces,
                          const ParamCoordinate& coord) {
  if (coord.alpha1 == 0.0 && coord.alpha2 == 0.0)
    throw ParameterError("coordinate weights (alpha1, alpha2) vanish");
  BaseCurve bc;
  bc.reference = ref;
  bc.coord = coord;
  bc.states.push_back(ref);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& p = pieces[k];
    if (p.points.empty()) continue;
    if (distance(p.points.front(), bc.states.back()) > 1e-8)
      throw NonMonotoneCoordinate("piece " + std::to_string(k) + " does not start where the previous one ends");
    for (std::size_t i = 1; i < p.points.size(); ++i) bc.states.push_back(p.points[i]);
  }
  for (const auto& u : bc.states) bc.ell_values.push_back(project_coord(coord, u));
  bc.pieces = std::move(pieces);
  if (bc.ell_values.size() < 2) return bc;
  bc.increasing = bc.ell_values[1] > bc.ell_values[0];
  for (std::size_t i = 0; i + 1 < bc.ell_values.size(); ++i) {
    const double d = bc.ell_values[i + 1] - bc.ell_values[i];
    if (!(bc.increasing ? d > 0.0 : d < 0.0))
      throw NonMonotoneCoordinate("coordinate stops being monotone at sample " + std::to_string(i + 1) +
                                  " (u1=" + std::to_string(bc.states[i + 1].u1) +
                                  ", u2=" + std::to_string(bc.states[i + 1].u2) + ")");
  }
  return bc;
}

std::vector<EffSample> lift_shock(const FluxModel& model, const State& ref,
                                  const BasePiece& piece, const ParamCoordinate& coord) {
  const double ell_r = project_coord(coord, ref);
  const double phi_r = phi_at(model, coord, ref);
  std::vector<EffSample> out;
  out.reserve(piece.points.size());
  for (std::size_t i = 0; i < piece.points.size(); ++i) {
    const State& u = piece.points[i];
    const Vec2& t = piece.tangents[i];
    const double dl = coord.rate(t);
    if (dl == 0.0) throw NonMonotoneCoordinate("coordinate is stationary along a shock piece");
    EffSample s;
    s.state = u;
    s.ell = project_coord(coord, u);
    s.dstate = t / dl;
    if (distance(u, ref) < 1e-14) {
      s.f = phi_r;
      s.fprime = piece.speeds[i];
    } else {
      s.f = phi_r + piece.speeds[i] * (s.ell - ell_r);
      s.fprime = piece.speeds[i] + piece.rates[i] / dl * (s.ell - ell_r);
    }
    out.push_back(s);
  }
  return out;
}

namespace {

// End-corrected trapezoid over the samples idx[0..n) of a rarefaction piece.
double corrected_trapezoid(const std::vector<double>& ell, const std::vector<double>& lam,
                           const std::vector<double>& mu, const std::vector<std::size_t>& idx,
                           std::vector<double>* running) {
  double acc = 0.0;
  if (running) running->assign(1, 0.0);
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const std::size_t a = idx[j], b = idx[j + 1];
    const double h = ell[b] - ell[a];
    acc += 0.5 * h * (lam[a] + lam[b]) - h * h / 12.0 * (mu[b] - mu[a]);
    if (running) running->push_back(acc);
  }
  return acc;
}

}  // namespace

std::vector<EffSample> lift_rarefaction(const FluxModel& model, BasePiece& piece,
                                        const ParamCoordinate& coord, double f_start,
                                        const EffOptions& opts, const Tolerances& tol) {
  for (int attempt = 0;; ++attempt) {
    const std::size_t n = piece.points.size();
    std::vector<double> ell(n), mu(n);
    for (std::size_t i = 0; i < n; ++i) {
      ell[i] = project_coord(coord, piece.points[i]);
      const double dl = coord.rate(piece.tangents[i]);
      if (dl == 0.0) throw NonMonotoneCoordinate("coordinate is stationary along a rarefaction piece");
      mu[i] = piece.rates[i] / dl;
    }
    std::vector<std::size_t> fine(n), coarse;
    for (std::size_t i = 0; i < n; ++i) fine[i] = i;
    for (std::size_t i = 0; i < n; i += 2) coarse.push_back(i);
    if (n > 1 && coarse.back() != n - 1) coarse.push_back(n - 1);

    std::vector<double> running;
    const double ih = corrected_trapezoid(ell, piece.speeds, mu, fine, &running);
    const double i2h = corrected_trapezoid(ell, piece.speeds, mu, coarse, nullptr);
    const double estimate = std::abs(ih - i2h) / 15.0;

    if (estimate > opts.richardson_tol && attempt < opts.max_refinements && piece.segment &&
        piece.points.size() > 2) {
      const RarefactionSegment& old = *piece.segment;
      RarefactionOptions ro = opts.rarefaction;
      ro.step = (old.arclength.back() / static_cast<double>(old.size() - 1)) * 0.5;
      ro.max_length = old.arclength.back() * (1.0 + 1e-9) + ro.step;
      const RarefactionSegment again =
          integrate_rarefaction(model, old.points.front(), old.family, old.direction, ro, tol,
                                old.tangents.front());
      piece = rarefaction_piece(model, again, tol);
      continue;
    }

    std::vector<EffSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      EffSample& s = out[i];
      s.state = piece.points[i];
      s.ell = ell[i];
      s.f = f_start + running[i];
      s.fprime = piece.speeds[i];
      s.dstate = piece.tangents[i] / coord.rate(piece.tangents[i]);
    }
    return out;
  }
}

WaveGroup trace_wave_group(const FluxModel& model, const State& ref, Family family,
                           Orientation orientation, const EffOptions& opts,
                           const Tolerances& tol) {
  if (!in_domain(ref, tol.eps_dom)) throw DomainError("reference state outside the triangle");
  WaveGroup g;
  g.reference = ref;
  g.family = family;
  g.orientation = orientation;
  const double osign = orientation == Orientation::forward ? 1.0 : -1.0;

  const CharField cf = eigen_fields(model, ref, tol);
  Vec2 d;
  if (opts.start_direction) {
    d = opts.start_direction->normalized();
  } else {
    if (cf.degenerate)
      throw StartDegenerate("both eigenvalues coincide at R; a start direction is required");
    Vec2 r = cf.r(family);
    if (followed_nonlinearity(model, ref, r, tol) < 0.0) r = -r;
    d = -osign * r;  // shock side: lambda decreases going forward
  }
  g.direction = d;
  const FollowedEigen fe = follow_eigen(model, ref, d, tol);
  const Family fam0 = cf.degenerate ? family : fe.family;
  const double trend = osign * followed_nonlinearity(model, ref, fe.r, tol);

  enum class Stage { shock_initial, shock_resume, rarefaction };
  Stage stage = trend > tol.eps_nl ? Stage::rarefaction : Stage::shock_initial;
  State cur = ref;
  Vec2 dir = cf.degenerate ? d : fe.r;
  Family k = fam0;

  const auto start_of = [&](const std::vector<HugoniotStart>& starts) -> const HugoniotStart* {
    const HugoniotStart* best = nullptr;
    double best_dot = std::cos(0.2);
    for (const auto& s : starts) {
      const double dot = s.direction.dot(d);
      if (dot > best_dot) {
        best_dot = dot;
        best = &s;
      }
    }
    return best;
  };

  while (true) {
    if (static_cast<int>(g.pieces.size()) >= opts.max_pieces) {
      g.end = WaveGroup::End::max_pieces;
      break;
    }
    try {
      if (stage != Stage::rarefaction) {
        const bool initial = stage == Stage::shock_initial;
        HugoniotBranch branch;
        if (initial) {
          const auto starts = hugoniot_starts(model, ref, opts.continuation, tol);
          const HugoniotStart* s = start_of(starts);
          if (!s) {
            g.end = WaveGroup::End::no_branch;
            break;
          }
          branch = trace_branch(model, ref, *s, opts.continuation, tol);
        } else {
          branch = continue_hugoniot(model, ref, cur, dir, opts.continuation, tol);
          branch.points.front() = cur;
          branch.sigmas.front() = shock_speed(model, ref, cur).sigma;
        }
        const HugoniotBranch work =
            initial ? liu_trim(model, branch, orientation, opts.continuation, tol) : branch;
        const double reach = work.arclength.back();
        const auto bws = find_bethe_wendroff(model, branch, opts.continuation, tol, opts.bw_angle);
        const BetheWendroffPoint* bw = nullptr;
        for (const auto& b : bws) {
          if (b.arclength > 1e-9 && b.arclength <= reach + 1e-7) {
            bw = &b;
            break;
          }
        }
        if (!bw && work.size() < 2) {
          g.end = WaveGroup::End::no_branch;
          break;
        }
        const HugoniotBranch cut = bw ? truncate_branch(branch, bw->segment, bw->point) : work;
        g.pieces.push_back(shock_piece(model, ref, cut, k, initial));
        if (!bw) {
          const bool whole = work.size() == branch.size() &&
                             distance(work.points.back(), branch.points.back()) < 1e-14;
          g.end = whole && branch.stop == HugoniotBranch::Stop::boundary ? WaveGroup::End::boundary
                                                                       : WaveGroup::End::locus_end;
          break;
        }
        g.transitions.push_back(BreakTag::bethe_wendroff);
        cur = bw->point.state;
        dir = bw->point.tangent;
        k = bw->family;
        stage = Stage::rarefaction;
      } else {
        const FollowedEigen f = follow_eigen(model, cur, dir, tol);
        const double nl = followed_nonlinearity(model, cur, f.r, tol);
        if (std::abs(nl) <= tol.eps_nl) {
          g.end = WaveGroup::End::inflection_start;
          break;
        }
        const RarefactionSegment seg =
            integrate_rarefaction(model, cur, k, nl > 0.0 ? Orientation::forward : Orientation::backward,
                                  opts.rarefaction, tol, f.r);
        if (seg.size() < 2) {
          g.end = WaveGroup::End::inflection_start;
          break;
        }
        g.pieces.push_back(rarefaction_piece(model, seg, tol));
        using Stop = RarefactionSegment::Stop;
        if (seg.stop_reason == Stop::boundary) {
          g.end = WaveGroup::End::boundary;
          break;
        }
        if (seg.stop_reason == Stop::hyperbolicity_loss) {
          g.end = WaveGroup::End::hyperbolicity_loss;
          break;
        }
        if (seg.stop_reason == Stop::max_length) {
          g.end = WaveGroup::End::max_length;
          break;
        }
        cur = seg.points.back();
        dir = seg.tangents.back();
        k = seg.families.back();
        const double res = shock_speed(model, ref, cur).residual;
        if (res > opts.locus_tol && opts.stop_off_locus) {
          g.end = WaveGroup::End::off_locus;
          break;
        }
        if (res > opts.locus_tol)
          throw TransitionOffLocus("inflection state is off H(R), residual " + std::to_string(res));
        g.transitions.push_back(BreakTag::inflection);
        stage = Stage::shock_resume;
      }
    } catch (const Error& e) {
      rethrow_with_context(e, "wave group piece " + std::to_string(g.pieces.size()));
    }
  }
  return g;
}

EffectiveFlux lift_wave_group(const FluxModel& model, WaveGroup group,
                              const ParamCoordinate& coord, const EffOptions& opts,
                              const Tolerances& tol) {
  EffectiveFlux eff;
  eff.reference = group.reference;
  eff.family = group.family;
  eff.orientation = group.orientation;
  eff.coord = coord;
  eff.end = group.end;
  eff.ell_reference = project_coord(coord, group.reference);
  eff.phi_reference = phi_at(model, coord, group.reference);

  // Validates the coordinate before any quadrature is spent.
  (void)make_base_curve(group.reference, group.pieces, coord);

  if (group.pieces.empty()) {
    EffSample s;
    s.state = group.reference;
    s.ell = eff.ell_reference;
    s.f = eff.phi_reference;
    s.fprime = follow_eigen(model, group.reference, group.direction, tol).lambda;
    eff.samples.push_back(s);
    eff.base = make_base_curve(group.reference, {}, coord);
    return eff;
  }

  std::size_t kept = group.pieces.size();
  for (std::size_t p = 0; p < group.pieces.size(); ++p) {
    BasePiece& piece = group.pieces[p];
    std::vector<EffSample> lifted;
    try {
      lifted = piece.kind == PieceKind::shock
                   ? lift_shock(model, group.reference, piece, coord)
                   : lift_rarefaction(model, piece, coord,
                                      eff.samples.empty() ? eff.phi_reference : eff.samples.back().f,
                                      opts, tol);
    } catch (const Error& e) {
      rethrow_with_context(e, "lifting piece " + std::to_string(p));
    }
    for (auto& s : lifted) s.piece = p;

    if (p > 0) {
      Breakpoint b;
      b.tag = group.transitions[p - 1];
      b.state = lifted.front().state;
      b.ell = lifted.front().ell;
      b.before = group.pieces[p - 1].family;
      b.after = piece.family;
      b.piece = p;
      b.jump_f = lifted.front().f - eff.samples.back().f;
      b.jump_fprime = lifted.front().fprime - eff.samples.back().fprime;
      eff.breakpoints.push_back(b);
    }

    EffPiece ep;
    ep.kind = piece.kind;
    ep.family = piece.family;
    ep.first = eff.samples.size();

    bool stop = false;
    for (const auto& s : lifted) {
      eff.samples.push_back(s);
      if (opts.ell_limit) {
        const double beyond = (s.ell - *opts.ell_limit) * (s.ell - eff.ell_reference);
        if (beyond > 0.0 && std::abs(s.ell - eff.ell_reference) > std::abs(*opts.ell_limit - eff.ell_reference)) {
          stop = true;
          break;
        }
      }
    }
    ep.last = eff.samples.size() - 1;
    for (std::size_t i = ep.first; i <= ep.last; ++i)
      ep.lifting_error = std::max(ep.lifting_error,
                                  std::abs(eff.samples[i].f - phi_at(model, coord, eff.samples[i].state)));
    eff.pieces.push_back(ep);
    if (stop) {
      kept = p + 1;
      piece.points.resize(ep.last - ep.first + 1);
      piece.tangents.resize(piece.points.size());
      piece.speeds.resize(piece.points.size());
      piece.rates.resize(piece.points.size());
      eff.end = WaveGroup::End::max_length;
      break;
    }
  }
  group.pieces.resize(kept);
  eff.base = make_base_curve(group.reference, std::move(group.pieces), coord);
  return eff;
}

EffectiveFlux build_eff(const FluxModel& model, const State& ref, Family family,
                        Orientation orientation, const ParamCoordinate& coord,
                        const EffOptions& opts, const Tolerances& tol) {
  return lift_wave_group(model, trace_wave_group(model, ref, family, orientation, opts, tol), coord,
                         opts, tol);
}

double EffectiveFlux::ell_min() const {
  return std::min(samples.front().ell, samples.back().ell);
}
double EffectiveFlux::ell_max() const {
  return std::max(samples.front().ell, samples.back().ell);
}

SampledFlux EffectiveFlux::interpolant() const {
  std::vector<double> l, f, fp;
  for (const auto& s : samples) {
    if (!l.empty() && std::abs(s.ell - l.back()) <= kDuplicate) continue;
    l.push_back(s.ell);
    f.push_back(s.f);
    fp.push_back(s.fprime);
  }
  return SampledFlux(std::move(l), std::move(f), std::move(fp));
}

namespace {

// Sample interval [i, i+1] of the curve containing l, skipping joints.
std::size_t locate(const std::vector<EffSample>& s, double ell) {
  const bool inc = s.back().ell >= s.front().ell;
  std::size_t lo = 0, hi = s.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if ((s[mid].ell <= ell) == inc)
      lo = mid;
    else
      hi = mid;
  }
  while (lo + 1 < s.size() - 1 && std::abs(s[lo + 1].ell - s[lo].ell) <= kDuplicate) ++lo;
  return lo;
}

}  // namespace

State EffectiveFlux::state_at(double ell) const {
  if (samples.size() == 1) return samples.front().state;
  const std::size_t i = locate(samples, ell);
  const EffSample& a = samples[i];
  const EffSample& b = samples[i + 1];
  const double h = b.ell - a.ell;
  if (std::abs(h) <= kDuplicate) return b.state;
  const double t = std::clamp((ell - a.ell) / h, 0.0, 1.0);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const Vec2 v = h00 * a.state.vec() + h10 * h * a.dstate + h01 * b.state.vec() + h11 * h * b.dstate;
  return State::from(v);
}

std::size_t EffectiveFlux::piece_at(double ell) const {
  if (samples.size() == 1) return 0;
  return samples[locate(samples, ell) + 1].piece;
}

}  // namespace rieff

namespace rieff {

double lifting_identity_error(const FluxModel& model, const EffectiveFlux& eff) {
  double worst = 0.0;
  for (const auto& s : eff.samples)
    worst = std::max(worst, std::abs(s.f - flux_combination(eff.coord, model.flux(s.state))));
  return worst;
}

}  // namespace rieff
