#include "rieff/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace rieff {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, r.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> fields) {
  if (fields.size() != header_.size())
    throw ParameterError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(header_.size()));
  rows_.push_back(std::move(fields));
  return *this;
}

CsvTable& CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(format_number(v));
  return row(std::move(f));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

void CsvTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + path + " for writing");
  write(out);
  if (!out) throw ParameterError("write to " + path + " failed");
}

CsvTable hugoniot_table(const FluxModel& model, const std::vector<HugoniotBranch>& branches) {
  CsvTable t({"branch", "s", "u1", "u2", "sigma", "lambda_s", "lambda_f", "lax_class"});
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const auto& br = branches[b];
    for (std::size_t i = 0; i < br.size(); ++i) {
      const State& u = br.points[i];
      std::string ls = "nan", lf = "nan";
      try {
        const CharField cf = eigen_fields(model, u);
        ls = format_number(cf.lambda_s);
        lf = format_number(cf.lambda_f);
      } catch (const Error&) {
      }
      std::string lax = i < br.lax_classes.size() ? std::string(to_string(br.lax_classes[i].tag)) : "";
      t.row({std::to_string(b), format_number(br.arclength[i]), format_number(u.u1), format_number(u.u2),
             format_number(br.sigmas[i]), ls, lf, lax});
    }
  }
  return t;
}

CsvTable rarefaction_table(const FluxModel& model, const RarefactionSegment& seg) {
  CsvTable t({"s", "u1", "u2", "lambda", "nonlinearity", "family"});
  for (std::size_t i = 0; i < seg.points.size(); ++i) {
    const State& u = seg.points[i];
    const Family k = i < seg.families.size() ? seg.families[i] : seg.family;
    std::string nl = "nan";
    try {
      nl = format_number(followed_nonlinearity(model, u, seg.tangents[i]));
    } catch (const Error&) {
    }
    t.row({format_number(seg.arclength[i]), format_number(u.u1), format_number(u.u2),
           format_number(seg.lambdas[i]), nl, std::string(to_string(k))});
  }
  return t;
}

CsvTable eff_table(const EffectiveFlux& eff) {
  CsvTable t({"ell", "f", "fprime", "u1", "u2", "piece_kind"});
  for (const auto& s : eff.samples)
    t.row({format_number(s.ell), format_number(s.f), format_number(s.fprime),
           format_number(s.state.u1), format_number(s.state.u2),
           std::string(to_string(eff.pieces[s.piece].kind))});
  return t;
}

CsvTable profile_table(const std::vector<double>& xi, const std::vector<State>& states) {
  CsvTable t({"xi", "u1", "u2", "u3"});
  for (std::size_t i = 0; i < xi.size() && i < states.size(); ++i)
    t.row(std::vector<double>{xi[i], states[i].u1, states[i].u2, states[i].u3()});
  return t;
}

CsvTable grid_table(const Grid1D& grid) {
  CsvTable t({"x", "u1", "u2", "u3"});
  for (int i = 0; i < grid.N; ++i) {
    const State& u = grid.cells[i];
    t.row(std::vector<double>{grid.center(i), u.u1, u.u2, u.u3()});
  }
  return t;
}

}  // namespace rieff
