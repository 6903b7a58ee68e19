#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plab/attractor.hpp"
#include "plab/dynamics.hpp"
#include "plab/energy.hpp"
#include "plab/integrator.hpp"
#include "plab/lattice.hpp"
#include "plab/nonlinearity.hpp"
#include "plab/noise.hpp"

namespace plab::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// Small CSV builder; every cell goes through format_number.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::size_t rows() const noexcept { return rows_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Long-format plot data: one (series, x, y) per line.
class LongTable {
 public:
  LongTable();
  void add(std::string_view series, double x, double y);
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

// LatticeVector: {"half_width": N, "values": [...]} and "site,value" rows.
json to_json(const LatticeVector& v);
LatticeVector lattice_from_json(const json& j);
std::string to_csv(const LatticeVector& v);
/// Parses "site,value" rows (optional header). Half-width is the largest
/// |site| unless half_width >= 0 is given; missing sites are 0.
LatticeVector lattice_from_csv(std::string_view text, int half_width = -1);

json to_json(const ConditionReport& r);

/// Rows (t, omega(t), z(t)) on the path grid.
std::string path_csv(const WienerPath& omega, const OUPath& ou);
json path_manifest(const WienerPath& omega);

/// Rows (t, ||v||, ||v||_{p+1}, tail_I0...) at the checkpoints.
std::string trajectory_csv(const Trajectory& traj, double p, const std::vector<int>& tail_sites);
json trajectory_snapshots(const Trajectory& traj);

std::string energy_csv(const EnergyReport& r);
json to_json(const EnergyReport& r);
json to_json(const TemperednessReport& r);
std::string temperedness_csv(const TemperednessReport& r);

std::string absorption_csv(const AbsorptionReport& r);
json to_json(const AbsorptionReport& r);
std::string radius_temper_csv(const RadiusTemperReport& r);
json to_json(const RadiusTemperReport& r);
std::string nullity_csv(const NullityReport& r);
json to_json(const NullityReport& r);
std::string pullback_csv(const PullbackReport& r);
json to_json(const PullbackReport& r);

/// Writes the whole file in one go; throws Error on I/O failure.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace plab::io
