#include "rieff/io.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace rieff;

TEST_SUITE("io") {
  TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(1e-20) == "9.9999999999999995e-21");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    // round trip
    for (double v : {1.0 / 3, std::sqrt(2.0), 6.02e23, -1e-300}) CHECK(std::stod(format_number(v)) == v);
  }

  TEST_CASE("csv table") {
    CsvTable t({"a", "b"});
    t.row(std::vector<double>{1.0, 0.5}).row(std::vector<std::string>{"x", "y"});
    std::ostringstream s;
    t.write(s);
    CHECK(s.str() == "a,b\n1,0.5\nx,y\n");
    CHECK(t.size() == 2);
    CHECK_THROWS_AS(t.row(std::vector<double>{1.0}), ParameterError);
    CHECK_THROWS_AS(t.save("/nonexistent-dir/x.csv"), ParameterError);
  }

  TEST_CASE("tables have the documented columns and are deterministic") {
    const CoreyModel m(1, 1, 1);
    const auto render = [&] {
      std::ostringstream s;
      hugoniot_table(m, trace_hugoniot(m, {0.2, 0.3})).write(s);
      rarefaction_table(m, integrate_rarefaction(m, {0.2, 0.3}, Family::slow, Orientation::forward)).write(s);
      return s.str();
    };
    const std::string a = render(), b = render();
    CHECK(a == b);
    CHECK(a.rfind("branch,s,u1,u2,sigma,lambda_s,lambda_f,lax_class\n", 0) == 0);
    CHECK(a.find("s,u1,u2,lambda,nonlinearity,family\n") != std::string::npos);

    std::ostringstream e;
    EffOptions o;
    o.start_direction = Vec2(1, 1).normalized();
    eff_table(build_eff(m, {0.0, 0.0}, Family::slow, Orientation::backward, ParamCoordinate::u3(), o)).write(e);
    CHECK(e.str().rfind("ell,f,fprime,u1,u2,piece_kind\n", 0) == 0);
    CHECK(e.str().find(",shock\n") != std::string::npos);
    CHECK(e.str().find(",rarefaction\n") != std::string::npos);
  }

  TEST_CASE("grid and profile tables") {
    const CoreyModel m(1, 1, 1);
    const Grid1D g = make_riemann_grid(m, {0.5, 0.5}, {0.0, 0.0}, 16, 0.5);
    std::ostringstream s;
    grid_table(g).write(s);
    CHECK(s.str().rfind("x,u1,u2,u3\n", 0) == 0);
    std::ostringstream p;
    profile_table({0.0, 1.0}, {State{0.5, 0.5}, State{0.0, 0.0}}).write(p);
    CHECK(p.str() == "xi,u1,u2,u3\n0,0.5,0.5,0\n1,0,0,1\n");
  }
}
