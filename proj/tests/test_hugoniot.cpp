#include "rieff/hugoniot.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rieff;

namespace {

const HugoniotBranch& branch_along(const std::vector<HugoniotBranch>& bs, const Vec2& d) {
  const HugoniotBranch* best = &bs.front();
  for (const auto& b : bs)
    if (b.start_direction.dot(d.normalized()) > best->start_direction.dot(d.normalized())) best = &b;
  return *best;
}

double max_rh(const FluxModel& m, const HugoniotBranch& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (distance(b.points[i], b.reference) < 1e-12) continue;
    const ShockSpeed s = shock_speed(m, b.reference, b.points[i]);
    w = std::max(w, s.residual);
    w = std::max(w, std::abs(s.sigma - b.sigmas[i]));
  }
  return w;
}

}  // namespace

TEST_SUITE("hugoniot") {
  TEST_CASE("shock_speed by hand") {
    const CoreyModel m(1, 1, 1);
    const ShockSpeed s = shock_speed(m, {0.0, 0.0}, {0.5, 0.0});
    CHECK(std::abs(s.sigma - 1.0) < 1e-15);
    CHECK(s.residual < 1e-15);
  }

  TEST_CASE("coincident states") {
    const CoreyModel m(1, 1, 1);
    CHECK_THROWS_AS(shock_speed(m, {0.3, 0.2}, {0.3 + 1e-16, 0.2}), CoincidentStates);
  }

  TEST_CASE("off-locus pairs report a residual") {
    const CoreyModel m(1, 1, 1);
    CHECK(shock_speed(m, {0.3, 0.2}, {0.1, 0.6}).residual > 1e-3);
  }

  TEST_CASE("R = (0.7, 0): edge branch and the hyperbola") {
    const CoreyModel m(1, 1, 1);
    const double mm = 0.7;
    const auto bs = trace_hugoniot(m, {mm, 0.0});
    int edge = 0, detached = 0;
    const double fR = eval_flux(m, {mm, 0.0}).f1;
    for (const auto& b : bs) {
      if (std::abs(b.start_direction.y()) < 1e-9) {
        ++edge;
        for (const State& p : b.points) CHECK(p.u2 == 0.0);
        continue;
      }
      ++detached;
      double worst = 0.0;
      for (const State& p : b.points) {
        const double u1 = p.u1, u2 = p.u2;
        const double q = (1 - 2 * fR) * u1 * u1 - (1 + 2 * fR) * u1 * u2 - 2 * fR * u2 * u2 + 2 * fR * u1 +
                         (2 * fR + mm) * u2 - fR;
        worst = std::max(worst, std::abs(q));
      }
      CHECK(worst <= 1e-8);
    }
    CHECK(edge == 2);
    CHECK(detached >= 1);
  }

  TEST_CASE("RH residual on every traced point") {
    const CoreyModel m(1.4, 0.6, 2.2);
    std::vector<State> refs{{0.2, 0.3}, {0.6, 0.1}, {0.1, 0.1}, {0.4, 0.0}, {0.0, 0.0}};
    for (int i = 0; i < 6; ++i) refs.push_back(test::random_state(0.02));
    for (const State& R : refs)
      for (const auto& b : trace_hugoniot(m, R)) CHECK(max_rh(m, b) <= 1e-10);
  }

  TEST_CASE("branches start next to R, tangent to an eigenvector") {
    const CoreyModel m(1, 1, 1);
    const ContinuationOptions opts;
    for (const State R : {State{0.2, 0.3}, State{0.6, 0.1}, State{0.15, 0.05}}) {
      const CharField cf = eigen_fields(m, R);
      const auto bs = trace_hugoniot(m, R, opts);
      CHECK(bs.size() == 4);
      for (const auto& b : bs) {
        CHECK(distance(b.points.front(), R) <= opts.first_step + 1e-12);
        const double cs = std::abs(b.start_direction.x() * cf.r_s.y() - b.start_direction.y() * cf.r_s.x());
        const double cf_ = std::abs(b.start_direction.x() * cf.r_f.y() - b.start_direction.y() * cf.r_f.x());
        CHECK(std::min(cs, cf_) < 5e-3);
      }
    }
  }

  TEST_CASE("degenerate reference O: edges and separatrix") {
    const CoreyModel m(1, 1, 1);
    const auto bs = trace_hugoniot(m, {0.0, 0.0});
    CHECK(bs.size() == 3);
    for (const Vec2 d : {Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)})
      CHECK(branch_along(bs, d).start_direction.dot(d.normalized()) > 1 - 1e-9);
  }

  TEST_CASE("lax_classify patterns") {
    const CoreyModel m(1, 1, 1);
    const State R{0.4, 0.2}, U{0.6, 0.1};  // lambda_s(R) = 1.2346, lambda_s(U) = 0.4710
    const CharField cu = eigen_fields(m, U);
    CHECK(lax_classify(m, R, U, 0.8, Orientation::forward).tag == LaxTag::slow_shock);
    const LaxClass c = lax_classify(m, R, U, cu.lambda_s, Orientation::forward);
    CHECK(c.tag == LaxTag::characteristic_right);
    REQUIRE(c.family.has_value());
    CHECK(*c.family == Family::slow);
    // within the equality band
    CHECK(lax_classify(m, R, U, cu.lambda_s + 5e-10, Orientation::forward).tag == LaxTag::characteristic_right);
    CHECK(lax_classify(m, R, U, 3.0, Orientation::forward).tag == LaxTag::undercompressive);
    // orientation swaps the roles
    CHECK(lax_classify(m, U, R, 0.8, Orientation::backward).tag == LaxTag::slow_shock);
  }

  TEST_CASE("liu_trim on the edge from O ends at the Welge point") {
    const CoreyModel m(1, 1, 1);
    const auto bs = trace_hugoniot(m, {0.0, 0.0});
    const auto& edge = branch_along(bs, Vec2(1, 0));
    const auto trimmed = liu_trim(m, edge, Orientation::backward);
    CHECK(std::abs(trimmed.points.back().u1 - std::sqrt(0.5)) < 1e-7);
    CHECK(trimmed.points.back().u2 == 0.0);

    // sigma increases from the start: forward trim keeps only the first point
    CHECK(liu_trim(m, edge, Orientation::forward).size() == 1);

    // monotone sigma: nothing is cut
    std::size_t i = 0;
    while (edge.points[i + 1].u1 < 0.6) ++i;
    const auto part = truncate_branch(edge, i, edge.at(i + 1));
    CHECK(liu_trim(m, part, Orientation::backward).size() == part.size());
  }

  TEST_CASE("Bethe-Wendroff points from O") {
    const CoreyModel m(1, 1, 1);
    const auto bs = trace_hugoniot(m, {0.0, 0.0});

    const auto sep = find_bethe_wendroff(m, branch_along(bs, Vec2(1, 1)));
    REQUIRE(sep.size() == 1);
    const double l3 = 1 - std::sqrt(2.0 / 3.0);  // 0.1835034
    CHECK(std::abs(sep[0].point.state.u3() - l3) < 1e-8);
    CHECK(std::abs(sep[0].point.state.u1 - sep[0].point.state.u2) < 1e-12);
    CHECK(sep[0].family == Family::slow);
    const double lam_s = eigen_fields(m, sep[0].point.state).lambda_s;
    CHECK(std::abs(shock_speed(m, {0.0, 0.0}, sep[0].point.state).sigma - lam_s) < 1e-8);

    for (const Vec2 d : {Vec2(1, 0), Vec2(0, 1)}) {
      const auto e = find_bethe_wendroff(m, branch_along(bs, d));
      REQUIRE(e.size() == 1);
      CHECK(std::abs(e[0].point.state.vec().norm() - std::sqrt(0.5)) < 1e-8);
      CHECK(e[0].family == Family::fast);
    }
  }

  TEST_CASE("Bethe-Wendroff geometry: tangency and critical sigma") {
    const CoreyModel m(1, 1, 1);
    for (const State R : {State{0.0, 0.0}, State{0.7, 0.0}, State{0.3, 0.0}}) {
      for (const auto& b : trace_hugoniot(m, R))
        for (const auto& bw : find_bethe_wendroff(m, b)) {
          CHECK(bw.tangent_angle <= 1e-4);
          CHECK(std::abs(bw.point.dsigma_ds) <= 1e-6);
          CHECK(std::abs(bw.point.sigma - bw.lambda) <= 1e-10);
        }
    }
  }

  TEST_CASE("no sign change, no Bethe-Wendroff point") {
    const CoreyModel m(1, 1, 1);
    const auto bs = trace_hugoniot(m, {0.0, 0.0});
    const auto& edge = branch_along(bs, Vec2(1, 0));
    std::size_t i = 0;
    while (edge.points[i + 1].u1 < 0.5) ++i;
    CHECK(find_bethe_wendroff(m, truncate_branch(edge, i, edge.at(i + 1))).empty());
  }

  TEST_CASE("classify_branch fills one class per point") {
    const CoreyModel m(1, 1, 1);
    auto bs = trace_hugoniot(m, {0.2, 0.3});
    for (auto& b : bs) {
      classify_branch(m, b, Orientation::forward);
      CHECK(b.lax_classes.size() == b.size());
    }
  }
}
