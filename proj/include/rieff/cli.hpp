#pragma once

#include "rieff/eff.hpp"
#include "rieff/state.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieff {

/// Bad flag, bad config key or malformed value; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double A = 1.0, B = 1.0, C = 1.0;
  Tolerances tol;
  std::optional<ParamCoordinate> coord;
  std::optional<State> ref, left, right;
  std::optional<Family> family;
  std::optional<Orientation> orientation;
  std::optional<Vec2> direction;
  int N = 400;
  double t_end = 0.5;
  double cfl = 0.45;
  std::optional<double> x_extent;
  int samples = 401;  // profile points
  std::optional<double> xi_min, xi_max;
  bool compare = false;
  std::optional<std::uint64_t> seed;
  std::string out, profile;
};

/// Parses a JSON config document. Unknown keys, wrong types and
/// non-positive tolerances raise UsageError.
RunConfig parse_config(const std::string& text, RunConfig base = {});

State parse_state(const std::string& s);
Vec2 parse_vec2(const std::string& s);
Family parse_family(const std::string& s);
Orientation parse_orientation(const std::string& s);
ParamCoordinate parse_coord(const std::string& s);

/// Runs one subcommand. Exit 0 on success, 2 on usage error, 3 on numerical
/// failure or failed validation. `out` receives the one-line JSON summary.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rieff
