#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfl/kinetic/hydro.hpp"
#include "mfl/lab/report.hpp"
#include "mfl/quantum/wave.hpp"
#include "mfl/quantum/wigner.hpp"

namespace mfl::io {

/// Full-precision decimal ("%.17g"); non-finite values print as nan / inf / -inf.
std::string csv_number(double x);

/// Fixed-column table. The first output line is the header.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  explicit CsvTable(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add_row(std::vector<std::string> cells);
  std::string str() const;
};

/// parameter,seed,function,time,value,reference,error
CsvTable error_table(const lab::ExperimentReport& report);
/// parameter,error (headline error per ladder point)
CsvTable summary_table(const lab::ExperimentReport& report);
/// x,re,im,density
CsvTable wave_table(const quantum::WaveField& psi);
/// x,v,f (x-major)
CsvTable wigner_table(const quantum::WignerGrid& f);
/// x,rho,u,E
CsvTable snapshot_table(const kinetic::EulerianSnapshot& s);
/// marker,x...,u...,density,jacobian,mass
CsvTable marker_table(const kinetic::DensityField& field);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mfl::io
