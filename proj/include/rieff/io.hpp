#pragma once

#include "rieff/eff.hpp"
#include "rieff/fvm.hpp"
#include "rieff/hugoniot.hpp"
#include "rieff/rarefaction.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace rieff {

/// Locale-independent, 17 significant digits, shortest of fixed/scientific.
std::string format_number(double v);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> fields);
  CsvTable& row(const std::vector<double>& values);

  std::size_t size() const { return rows_.size(); }
  void write(std::ostream& out) const;
  void save(const std::string& path) const;  // throws ParameterError if unwritable

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// branch, s, u1, u2, sigma, lambda_s, lambda_f, lax_class
CsvTable hugoniot_table(const FluxModel& model, const std::vector<HugoniotBranch>& branches);
// s, u1, u2, lambda, nonlinearity, family
CsvTable rarefaction_table(const FluxModel& model, const RarefactionSegment& segment);
// ell, f, fprime, u1, u2, piece_kind
CsvTable eff_table(const EffectiveFlux& eff);
// xi, u1, u2, u3
CsvTable profile_table(const std::vector<double>& xi, const std::vector<State>& states);
// x, u1, u2, u3
CsvTable grid_table(const Grid1D& grid);

}  // namespace rieff
