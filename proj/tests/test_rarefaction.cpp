#include "rieff/rarefaction.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rieff;

namespace {

bool lambda_monotone(const RarefactionSegment& s) {
  const double sgn = s.direction == Orientation::forward ? 1.0 : -1.0;
  for (std::size_t i = 1; i < s.lambdas.size(); ++i)
    if (!(sgn * (s.lambdas[i] - s.lambdas[i - 1]) > 0.0)) return false;
  return true;
}

}  // namespace

TEST_SUITE("rarefaction") {
  TEST_CASE("A = B: the diagonal field stays on u1 = u2") {
    const CoreyModel m(1.3, 1.3, 0.8);
    const State u0{0.3, 0.3};
    const CharField cf = eigen_fields(m, u0);
    const Family k = std::abs(cf.r_s.x() - cf.r_s.y()) < 1e-9 ? Family::slow : Family::fast;
    for (Orientation o : {Orientation::forward, Orientation::backward}) {
      const auto seg = integrate_rarefaction(m, u0, k, o);
      CHECK(seg.size() > 10);
      double worst = 0.0;
      for (const State& p : seg.points) worst = std::max(worst, std::abs(p.u1 - p.u2));
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("edge field from (0.6, 0) stops at the inflection (0.5, 0)") {
    // lambda = f'(s) grows toward 0.5, so this is the forward direction
    const CoreyModel m(1, 1, 1);
    const auto seg = integrate_rarefaction(m, {0.6, 0.0}, Family::fast, Orientation::forward);
    CHECK(seg.stop_reason == RarefactionSegment::Stop::inflection);
    const State u = find_inflection(m, seg);
    CHECK(std::abs(u.u1 - 0.5) < 1e-8);
    CHECK(u.u2 == 0.0);
    CHECK(std::abs(nonlinearity(m, u, Family::fast)) <= 1e-8);
    CHECK(lambda_monotone(seg));
    // the refined point is within one step of the last regular sample
    REQUIRE(seg.size() >= 2);
    CHECK(distance(seg.points[seg.size() - 1], seg.points[seg.size() - 2]) <= 1e-3 + 1e-12);

    // the other way lambda falls until the vertex W
    const auto back = integrate_rarefaction(m, {0.6, 0.0}, Family::fast, Orientation::backward);
    CHECK(back.stop_reason == RarefactionSegment::Stop::boundary);
    CHECK(std::abs(back.points.back().u1 - 1.0) < 1e-9);
    CHECK(lambda_monotone(back));
    CHECK_THROWS_AS(find_inflection(m, back), NotAnInflectionStop);
  }

  TEST_CASE("lambda is strictly monotone on random segments") {
    const CoreyModel m(0.9, 1.7, 1.2);
    for (int n = 0; n < 12; ++n) {
      const State u0 = test::random_state(0.02);
      for (Family k : {Family::slow, Family::fast})
        for (Orientation o : {Orientation::forward, Orientation::backward}) {
          const auto seg = integrate_rarefaction(m, u0, k, o);
          CHECK(lambda_monotone(seg));
          for (const State& p : seg.points) CHECK(in_domain(p, 1e-12));
        }
    }
  }

  TEST_CASE("step halving shows fourth-order convergence") {
    // the edge field is a straight line, so the check uses a curved interior field
    const CoreyModel m(1, 1, 1);
    const State u0{0.2, 0.3};
    std::vector<RarefactionSegment> runs;
    for (double h : {0.02, 0.01, 0.005}) {
      RarefactionOptions o;
      o.step = h;
      o.max_length = 0.2;
      runs.push_back(integrate_rarefaction(m, u0, Family::slow, Orientation::backward, o));
    }
    const std::size_t n = 8;  // compare at s = 8 * 0.02
    REQUIRE(runs[0].size() > n);
    REQUIRE(runs[2].size() > 4 * n);
    const double e1 = distance(runs[0].points[n], runs[1].points[2 * n]);
    const double e2 = distance(runs[1].points[2 * n], runs[2].points[4 * n]);
    REQUIRE(e2 > 0.0);
    CHECK(std::log2(e1 / e2) >= 3.5);
  }

  TEST_CASE("reversing from the endpoint returns to the start") {
    const CoreyModel m(1, 1, 1);
    const State u0{0.2, 0.3};
    RarefactionOptions o;
    o.max_length = 0.05;
    const auto fwd = integrate_rarefaction(m, u0, Family::slow, Orientation::forward, o);
    const std::size_t n = fwd.size() - 1;
    o.max_length = 1.0;
    const auto rev = integrate_rarefaction(m, fwd.points.back(), fwd.families.back(), Orientation::backward, o,
                                           {}, -fwd.tangents.back());
    REQUIRE(rev.size() > n);
    CHECK(distance(rev.points[n], u0) <= 1e-6);
  }

  TEST_CASE("start on the inflection manifold gives a flagged one-point segment") {
    const CoreyModel m(1, 1, 1);
    const auto seg = integrate_rarefaction(m, {0.5, 0.0}, Family::fast, Orientation::forward);
    CHECK(seg.start_at_inflection);
    CHECK(seg.size() == 1);
  }

  TEST_CASE("degenerate start needs a direction") {
    const CoreyModel m(1, 1, 1);
    CHECK_THROWS_AS(integrate_rarefaction(m, {1.0 / 3, 1.0 / 3}, Family::slow, Orientation::forward),
                    StartDegenerate);
    const auto seg = integrate_rarefaction(m, {1.0 / 3, 1.0 / 3}, Family::slow, Orientation::forward, {}, {},
                                           Vec2(1, 0));
    CHECK(seg.size() > 1);
  }

  TEST_CASE("separatrix from O passes the umbilic and stops at its inflection") {
    const CoreyModel m(1, 1, 1);
    const auto seg = integrate_rarefaction(m, {0.0, 0.0}, Family::slow, Orientation::forward, {}, {},
                                           Vec2(1, 1).normalized());
    CHECK(seg.stop_reason == RarefactionSegment::Stop::inflection);
    CHECK(std::abs(seg.points.back().u1 - seg.points.back().u2) < 1e-9);
    CHECK(seg.families.front() != seg.families.back());
  }

  TEST_CASE("start outside the triangle") {
    const CoreyModel m(1, 1, 1);
    CHECK_THROWS_AS(integrate_rarefaction(m, {0.8, 0.3}, Family::slow, Orientation::forward), DomainError);
  }
}
