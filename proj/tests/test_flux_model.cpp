#include "rieff/flux_model.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rieff;

namespace {

// Rotation flux: J = [[0,-1],[1,0]] has complex eigenvalues everywhere.
class RotationModel final : public FluxModel {
 public:
  Flux flux(const State& u) const override { return {-u.u2, u.u1, 1.0 + u.u2 - u.u1}; }
  std::string name() const override { return "rotation"; }
};

double edge_flux(double s) { return s * s / (s * s + (1 - s) * (1 - s)); }

}  // namespace

TEST_SUITE("flux_model") {
  TEST_CASE("eval_flux examples") {
    const CoreyModel m(1, 1, 1);
    const Flux a = eval_flux(m, {1.0 / 3, 1.0 / 3});
    CHECK(a.f1 == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(a.f2 == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(a.f3 == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const Flux o = eval_flux(m, {0.0, 0.0});
    CHECK(o.f1 == 0.0);
    CHECK(o.f2 == 0.0);
    CHECK(o.f3 == 1.0);

    // hand evaluation: Q = 0.09 + 0.09 + 0.16
    const Flux b = eval_flux(m, {0.3, 0.3});
    CHECK(std::abs(b.f1 - 0.09 / 0.34) < 1e-15);
    CHECK(std::abs(b.f2 - 0.09 / 0.34) < 1e-15);
    CHECK(std::abs(b.f3 - 0.16 / 0.34) < 1e-15);
  }

  TEST_CASE("domain and parameter errors") {
    const CoreyModel m(1, 1, 1);
    CHECK_THROWS_AS(eval_flux(m, {-0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(eval_flux(m, {0.7, 0.4}), DomainError);
    CHECK_NOTHROW(eval_flux(m, {-1e-13, 0.5}));  // within eps_dom
    CHECK_THROWS_AS(CoreyModel(0.0, 1, 1), ParameterError);
    CHECK_THROWS_AS(CoreyModel(1, -1, 1), ParameterError);
  }

  TEST_CASE("fluxes sum to one and stay in [0,1] on a 100x100 grid") {
    const CoreyModel m(0.7, 2.3, 1.4);
    double worst = 0.0;
    bool bounded = true;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; i + j <= 100; ++j) {
        const Flux f = eval_flux(m, {i / 100.0, j / 100.0});
        worst = std::max(worst, std::abs(f.f1 + f.f2 + f.f3 - 1.0));
        for (double x : {f.f1, f.f2, f.f3}) bounded = bounded && x >= 0.0 && x <= 1.0;
      }
    CHECK(worst <= 1e-15);
    CHECK(bounded);
  }

  TEST_CASE("jacobian on the edge") {
    const CoreyModel m(1, 1, 1);
    const Mat2 J = jacobian(m, {0.5, 0.0});
    CHECK(J(1, 0) == 0.0);
    CHECK(J(1, 1) == 0.0);
    // 2 a s (1 - s) / Q^2 with a = 1, s = 0.5, Q = 0.5
    CHECK(std::abs(J(0, 0) - 2.0) < 1e-14);
  }

  TEST_CASE("jacobian matches central differences on 1000 random states") {
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const CoreyModel m(test::uniform(0.2, 5), test::uniform(0.2, 5), test::uniform(0.2, 5));
      const State u = test::random_state();
      const Mat2 J = jacobian(m, u);
      const double h = 1e-6;
      for (int c = 0; c < 2; ++c) {
        Vec2 e = Vec2::Zero();
        e[c] = h;
        const Vec2 fd = (m.flux(u + e).vec() - m.flux(u - e).vec()) / (2 * h);
        worst = std::max(worst, (J.col(c) - fd).cwiseAbs().maxCoeff());
      }
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("finite-difference fallback of the base class") {
    struct Wrapped final : FluxModel {
      CoreyModel inner{1.3, 0.8, 2.1};
      Flux flux(const State& u) const override { return inner.flux(u); }
      std::string name() const override { return "wrapped"; }
    } w;
    const State u{0.25, 0.35};
    CHECK((w.jacobian_at(u) - w.inner.jacobian_at(u)).cwiseAbs().maxCoeff() < 1e-7);
  }

  TEST_CASE("char_fields on the edge") {
    const CoreyModel m(1, 1, 1);
    const CharField cf = char_fields(m, {0.5, 0.0});
    CHECK(std::abs(cf.lambda_s) < 1e-14);
    CHECK(std::abs(cf.lambda_f - 2.0) < 1e-14);
  }

  TEST_CASE("eigen residual, ordering and orientation on random states") {
    const Tolerances tol;
    double worst = 0.0;
    bool ordered = true, oriented = true;
    for (int n = 0; n < 300; ++n) {
      const CoreyModel m(test::uniform(0.2, 5), test::uniform(0.2, 5), test::uniform(0.2, 5));
      const State u = test::random_state(0.01);
      const CharField cf = char_fields(m, u);
      if (cf.degenerate) continue;
      const Mat2 J = jacobian(m, u);
      for (Family k : {Family::slow, Family::fast}) {
        const double res = (J * cf.r(k) - cf.lambda(k) * cf.r(k)).norm() / (1.0 + std::abs(cf.lambda(k)));
        worst = std::max(worst, res);
        CHECK(std::abs(cf.r(k).norm() - 1.0) < 1e-12);
        // grad(lambda) . r along the oriented vector
        const double h = 1e-6;
        const CharField p = eigen_fields(m, u + h * cf.r(k)), q = eigen_fields(m, u - h * cf.r(k));
        const double d = (p.lambda(k) - q.lambda(k)) / (2 * h);
        if (std::abs(d) > 1e-4) oriented = oriented && d > 0.0;
      }
      ordered = ordered && cf.lambda_s <= cf.lambda_f;
    }
    CHECK(worst <= 1e-10);
    CHECK(ordered);
    CHECK(oriented);
    (void)tol;
  }

  TEST_CASE("A = B: eigenvectors on u1 = u2 are the diagonal directions") {
    const CoreyModel m(1.5, 1.5, 0.7);
    const CharField cf = eigen_fields(m, {0.2, 0.2});
    for (Family k : {Family::slow, Family::fast}) {
      const Vec2 r = cf.r(k);
      CHECK(std::abs(std::abs(r.x()) - std::sqrt(0.5)) < 1e-10);
      CHECK(std::abs(std::abs(r.y()) - std::sqrt(0.5)) < 1e-10);
    }
  }

  TEST_CASE("A = B symmetry swaps f1 and f2 and keeps the spectrum") {
    const CoreyModel m(2.0, 2.0, 0.5);
    for (int n = 0; n < 50; ++n) {
      const State u = test::random_state(0.01);
      const State v{u.u2, u.u1};
      const Flux fu = eval_flux(m, u), fv = eval_flux(m, v);
      CHECK(std::abs(fu.f1 - fv.f2) < 1e-15);
      CHECK(std::abs(fu.f2 - fv.f1) < 1e-15);
      const CharField a = eigen_fields(m, u), b = eigen_fields(m, v);
      CHECK(std::abs(a.lambda_s - b.lambda_s) < 1e-12);
      CHECK(std::abs(a.lambda_f - b.lambda_f) < 1e-12);
    }
  }

  TEST_CASE("umbilic point of the symmetric model") {
    // full symmetry forces J to be a multiple of I at the centroid
    const CoreyModel m(1, 1, 1);
    const CharField cf = eigen_fields(m, {1.0 / 3, 1.0 / 3});
    CHECK(cf.near_coincidence);
    CHECK(cf.degenerate);
  }

  TEST_CASE("complex speeds raise HyperbolicityLoss") {
    const RotationModel m;
    CHECK_THROWS_AS(eigen_fields(m, {0.3, 0.3}), HyperbolicityLoss);
    CHECK_THROWS_AS(nonlinearity(m, {0.3, 0.3}, Family::slow), HyperbolicityLoss);
  }

  TEST_CASE("nonlinearity vanishes at the edge inflection and changes sign") {
    const CoreyModel m(1, 1, 1);
    CHECK(std::abs(nonlinearity(m, {0.5, 0.0}, Family::fast)) < 1e-6);
    const double a = nonlinearity(m, {0.45, 0.0}, Family::fast);
    const double b = nonlinearity(m, {0.55, 0.0}, Family::fast);
    CHECK(a * b < 0.0);
    // edge speed is f'(s); its derivative changes sign at 0.5 as well
    const double h = 1e-4;
    const auto fpp = [&](double s) { return (edge_flux(s + h) - 2 * edge_flux(s) + edge_flux(s - h)) / (h * h); };
    CHECK(fpp(0.45) * fpp(0.55) < 0.0);
  }

  TEST_CASE("nonlinearity equals the centred difference of lambda along r") {
    const CoreyModel m(1.2, 0.9, 1.6);
    const Tolerances tol;
    for (const State u : {State{0.2, 0.3}, State{0.6, 0.1}, State{0.1, 0.7}}) {
      const CharField cf = eigen_fields(m, u);
      for (Family k : {Family::slow, Family::fast}) {
        const Vec2 r = cf.r(k);
        const double h = tol.h_nl;
        const double fd = (eigen_fields(m, u + h * r).lambda(k) - eigen_fields(m, u - h * r).lambda(k)) / (2 * h);
        CHECK(std::abs(nonlinearity(m, u, k) - fd) < 1e-6);
      }
    }
  }

  TEST_CASE("one-sided stencils on the boundary") {
    const CoreyModel m(1, 1, 1);
    // r_s at an edge point points into the triangle; the value stays finite
    const double v = nonlinearity(m, {0.3, 0.0}, Family::slow);
    CHECK(std::isfinite(v));
  }

  TEST_CASE("follow_eigen keeps the field aligned with the hint") {
    const CoreyModel m(1, 1, 1);
    const auto a = follow_eigen(m, {0.3, 0.2}, Vec2(1, 0));
    const auto b = follow_eigen(m, {0.3, 0.2}, Vec2(-1, 0));
    CHECK(a.r.dot(b.r) < -0.999);
    CHECK(a.lambda == b.lambda);
    CHECK(a.family == b.family);
  }
}
