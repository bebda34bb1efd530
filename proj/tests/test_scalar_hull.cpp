#include "rieff/scalar_hull.hpp"
#include "support.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>

using namespace rieff;

namespace {

// g(l) = c l^2 / (k (1-l)^2 + c l^2), l = u3 along an edge or the separatrix
struct Line {
  double k, c;
  double f(double l) const { return c * l * l / (k * (1 - l) * (1 - l) + c * l * l); }
  double fp(double l) const {
    const double D = k * (1 - l) * (1 - l) + c * l * l;
    const double dD = -2 * k * (1 - l) + 2 * c * l;
    return (2 * c * l * D - c * l * l * dD) / (D * D);
  }
};

SampledFlux sample(const std::function<double(double)>& f, const std::function<double(double)>& fp, int n = 2001) {
  std::vector<double> x, y, d;
  for (int i = 0; i < n; ++i) {
    const double l = double(i) / (n - 1);
    x.push_back(l);
    y.push_back(f(l));
    d.push_back(fp(l));
  }
  return {x, y, d};
}

SampledFlux sample(const Line& g, int n = 2001) {
  return sample([&](double l) { return g.f(l); }, [&](double l) { return g.fp(l); }, n);
}

// tangent from (1, 1) by bisection
double welge_oracle(const Line& g) {
  const auto T = [&](double l) { return g.fp(l) * (l - 1) - (g.f(l) - 1); };
  double a = 1e-9, b = 1 - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (T(a) * T(m) <= 0 ? b : a) = m;
  }
  return 0.5 * (a + b);
}

void check_entropy(const SampledFlux& f, const std::vector<ScalarWave>& ws) {
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const auto& w = ws[i];
    CHECK(w.speed_left <= w.speed_right + 1e-12);
    if (i) CHECK(ws[i - 1].speed_right <= w.speed_left + 1e-9);
    if (i) CHECK(std::abs(ws[i - 1].ell_right - w.ell_left) < 1e-12);
    if (w.kind != PieceKind::shock) continue;
    const double s = (f.value(w.ell_right) - f.value(w.ell_left)) / (w.ell_right - w.ell_left);
    CHECK(std::abs(s - w.speed_left) < 1e-9);
    // chord below f for l increasing, above for l decreasing
    const double sgn = w.ell_left < w.ell_right ? 1.0 : -1.0;
    for (int j = 1; j < 50; ++j) {
      const double l = w.ell_left + (w.ell_right - w.ell_left) * j / 50.0;
      CHECK(sgn * (f.value(l) - f.value(w.ell_left) - s * (l - w.ell_left)) >= -1e-9);
    }
  }
}

}  // namespace

TEST_SUITE("scalar_hull") {
  TEST_CASE("Welge point of the edge flux") {
    const SampledFlux f = sample(Line{1, 1});
    const double l = welge_point(f, 1.0, 0.0, 1.0);
    CHECK(std::abs(l - (1 - std::sqrt(0.5))) < 1e-7);
    CHECK(std::abs(f.derivative(l) * (l - 1) - (f.value(l) - 1)) <= 1e-10);
  }

  TEST_CASE("no tangency on a convex flux") {
    const SampledFlux f = sample([](double l) { return l * l; }, [](double l) { return 2 * l; });
    CHECK_THROWS_AS(welge_point(f, 0.0, 0.0, 1.0), NoTangency);
  }

  TEST_CASE("hulls of l^2") {
    const SampledFlux f = sample([](double l) { return l * l; }, [](double l) { return 2 * l; });
    const auto down = hull_solution(f, 1.0, 0.0);
    REQUIRE(down.size() == 1);
    CHECK(down[0].kind == PieceKind::shock);
    CHECK(std::abs(down[0].speed_left - 1.0) < 1e-12);

    const auto up = hull_solution(f, 0.0, 1.0);
    REQUIRE(up.size() == 1);
    CHECK(up[0].kind == PieceKind::rarefaction);
    CHECK(std::abs(up[0].speed_left) < 1e-12);
    CHECK(std::abs(up[0].speed_right - 2.0) < 1e-12);
  }

  TEST_CASE("separatrix flux: rarefaction then shock") {
    const Line g{0.5, 1.0};
    const SampledFlux f = sample(g, 4001);
    const auto ws = hull_solution(f, 0.0, 1.0);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].kind == PieceKind::rarefaction);
    CHECK(ws[1].kind == PieceKind::shock);
    const double ls = 1 - std::sqrt(2.0 / 3.0);
    CHECK(std::abs(ws[0].ell_right - ls) < 1e-7);
    CHECK(std::abs(ws[1].speed_left - 1.1123724357) < 1e-8);
    CHECK(std::abs(g.fp(ls) - 1.1123724357) < 1e-9);
    check_entropy(f, ws);
  }

  TEST_CASE("closed-form Welge values") {
    for (const auto& abc : {std::array<double, 3>{1, 1, 1}, std::array<double, 3>{2, 1, 1},
                            std::array<double, 3>{0.7, 1.9, 1.3}}) {
      const auto [a, b, c] = abc;
      const CoreyWelge w = corey_welge_closed_form(a, b, c);
      CHECK(std::abs(w.l1 - welge_oracle({a, c})) < 1e-10);
      CHECK(std::abs(w.l2 - welge_oracle({b, c})) < 1e-10);
      CHECK(std::abs(w.l3 - welge_oracle({a * b / (a + b), c})) < 1e-10);
      CHECK(w.ordered == (w.l3 < std::min(w.l1, w.l2)));
    }
    CHECK(std::abs(corey_welge_closed_form(1, 1, 1).l1 - 0.2928932188) < 1e-9);
    CHECK_THROWS_AS(corey_welge_closed_form(0, 1, 1), ParameterError);
    CHECK_THROWS_AS(corey_welge_closed_form(1, -2, 1), ParameterError);
  }

  TEST_CASE("random Riemann data satisfy the Olejnik chord condition") {
    const Line g{0.8, 1.3};
    const SampledFlux f = sample(g);
    for (int n = 0; n < 40; ++n) {
      const double a = test::uniform(0, 1), b = test::uniform(0, 1);
      const auto ws = hull_solution(f, a, b);
      REQUIRE(!ws.empty());
      CHECK(std::abs(ws.front().ell_left - a) < 1e-12);
      CHECK(std::abs(ws.back().ell_right - b) < 1e-12);
      check_entropy(f, ws);
    }
  }

  TEST_CASE("mirror symmetry of the symmetric S-shaped flux") {
    // f(1 - l) = 1 - f(l): data (1-a, 1-b) gives the same speeds
    const SampledFlux f = sample(Line{1, 1});
    for (const auto& ab : {std::array<double, 2>{0.1, 0.9}, std::array<double, 2>{0.8, 0.05},
                           std::array<double, 2>{0.3, 0.6}}) {
      const auto p = hull_solution(f, ab[0], ab[1]);
      const auto q = hull_solution(f, 1 - ab[0], 1 - ab[1]);
      REQUIRE(p.size() == q.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p[i].kind == q[i].kind);
        CHECK(std::abs(p[i].speed_left - q[i].speed_left) < 1e-8);
        CHECK(std::abs(p[i].speed_right - q[i].speed_right) < 1e-8);
        CHECK(std::abs(p[i].ell_right - (1 - q[i].ell_right)) < 1e-8);
      }
    }
  }

  TEST_CASE("equal states give no waves or a trivial one") {
    const SampledFlux f = sample(Line{1, 1});
    const auto ws = hull_solution(f, 0.4, 0.4);
    for (const auto& w : ws) CHECK(w.ell_left == w.ell_right);
  }
}
