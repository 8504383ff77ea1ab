#include "mfl/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mfl/core/errors.hpp"

namespace mfl::io {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw InvalidArgument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(columns.size()));
  rows.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cell(cells[i]);
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable error_table(const lab::ExperimentReport& report) {
  CsvTable t({"parameter", "seed", "function", "time", "value", "reference", "error"});
  for (const auto& e : report.entries)
    t.add_row({csv_number(e.parameter), std::to_string(e.seed), e.function, csv_number(e.time), csv_number(e.value),
               csv_number(e.reference), csv_number(e.error())});
  return t;
}

CsvTable summary_table(const lab::ExperimentReport& report) {
  CsvTable t({"parameter", "error"});
  for (size_t i = 0; i < report.ladder.size() && i < report.errors.size(); ++i)
    t.add_row({csv_number(report.ladder[i]), csv_number(report.errors[i])});
  return t;
}

CsvTable wave_table(const quantum::WaveField& psi) {
  CsvTable t({"x", "re", "im", "density"});
  for (int j = 0; j < psi.size(); ++j) {
    const auto z = psi.values[j];
    t.add_row({csv_number(psi.grid.coordinate(0, j)), csv_number(z.real()), csv_number(z.imag()),
               csv_number(std::norm(z))});
  }
  return t;
}

CsvTable wigner_table(const quantum::WignerGrid& f) {
  CsvTable t({"x", "v", "f"});
  for (size_t i = 0; i < f.x.size(); ++i)
    for (size_t k = 0; k < f.v.size(); ++k) t.add_row({csv_number(f.x[i]), csv_number(f.v[k]), csv_number(f.at(i, k))});
  return t;
}

CsvTable snapshot_table(const kinetic::EulerianSnapshot& s) {
  CsvTable t({"x", "rho", "u", "E"});
  for (size_t i = 0; i < s.x.size(); ++i)
    t.add_row({csv_number(s.x[i]), csv_number(s.rho[i]), csv_number(s.u[i]), csv_number(s.E[i])});
  return t;
}

CsvTable marker_table(const kinetic::DensityField& field) {
  const int d = field.dim;
  std::vector<std::string> cols{"marker"};
  for (int a = 0; a < d; ++a) cols.push_back("x" + std::to_string(a));
  for (int a = 0; a < d; ++a) cols.push_back("u" + std::to_string(a));
  for (const char* c : {"density", "jacobian", "mass"}) cols.push_back(c);
  CsvTable t(std::move(cols));
  for (int m = 0; m < field.size(); ++m) {
    std::vector<std::string> r{std::to_string(m)};
    for (int a = 0; a < d; ++a) r.push_back(csv_number(field.positions[m * d + a]));
    for (int a = 0; a < d; ++a) r.push_back(csv_number(field.velocity[m * d + a]));
    r.push_back(csv_number(field.density[m]));
    r.push_back(csv_number(field.jacobian[m]));
    r.push_back(csv_number(field.mass[m]));
    t.add_row(std::move(r));
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace mfl::io
