// JSON snapshots, CSV tables and self-contained SVG plots.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvmhd/diagnostics.hpp"

namespace pvmhd {

using json = nlohmann::json;

inline constexpr const char* kSnapshotSchema = "pvmhd.snapshot/1";

json to_json(const HeightField& f);
HeightField height_field_from_json(const json& j);

json to_json(const PhysicalEnergy& e);
json to_json(const HigherEnergy& e);
json to_json(const StabilityMonitors& m);
json to_json(const EnergyReport& r);

// Full state plus the parameters needed to re-resolve it.
json snapshot_json(const FlowState& s, const EvolutionParams& p);
FlowState snapshot_state(const json& j);
EvolutionParams snapshot_params(const json& j);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

// rho, theta, x, y followed by one column per field.
void write_field_csv(const std::string& path, const MappedDomainGrid& grid,
                     const std::vector<std::pair<std::string, const Field*>>& fields);
void write_boundary_operator_csv(const std::string& path, const BoundaryOperator& op);

struct DispersionRow {
  int k = 0;
  double param = 0.0;  // value of the swept background parameter
  DispersionResult res;
};
void write_dispersion_csv(const std::string& path, const std::string& param_name,
                          const std::vector<DispersionRow>& rows);
// Class map over (k, param) with the threshold curve overlaid.
std::string stability_map_svg(const std::string& param_name, const std::vector<DispersionRow>& rows,
                              const std::vector<std::pair<double, double>>& boundary);

// Modal cosine amplitudes 2|phi_k| for k = 1..kmax (|phi_0| for k = 0 is not included).
std::vector<double> modal_amplitudes(const Vec& phi, int kmax);

class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::string& path, int kmax);
  void append(double t, const Vec& phi, const PhysicalEnergy& e, const StabilityMonitors& m);

 private:
  std::ofstream out_;
  int kmax_;
};

// Round-trip safe formatting for CSV numbers.
std::string fmt_double(double x);

}  // namespace pvmhd
