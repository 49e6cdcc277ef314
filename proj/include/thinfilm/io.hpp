#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm/diagnostics.hpp"
#include "thinfilm/fsp.hpp"
#include "thinfilm/solver.hpp"

namespace thinfilm {

// "# key=value" lines written ahead of every table.
using Header = std::map<std::string, std::string>;

struct TrajectoryFiles {
  std::filesystem::path trajectory = "trajectory.csv";
  std::filesystem::path diagnostics = "diagnostics.csv";
  std::filesystem::path events = "events.csv";
};

// Writes trajectory.csv (t,x,u), diagnostics.csv (t,mass,energy,entropy,
// edge_left,edge_right,dt,newton_iters) and events.csv into dir.
// entropy uses alpha, NaN where undefined.
TrajectoryFiles write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                 const Header& header, double alpha, double edge_rel_threshold = 1e-7);

// Snapshots, lift and grid of a trajectory.csv; params are not stored there.
Trajectory read_trajectory(const std::filesystem::path& file, const ModelParams& params);

Header read_header(const std::filesystem::path& file);

void write_reports(const std::vector<EstimateReport>& reports, const std::filesystem::path& file,
                   const Header& header);

void write_verdict(const FspVerdict& v, const std::filesystem::path& dir, const Header& header);

void write_key_values(const std::filesystem::path& file, const Header& header,
                      const std::vector<std::pair<std::string, std::string>>& rows);

struct FitWindow {
  std::vector<double> log_distance;
  std::vector<double> log_height;
  double exponent = 0.0;
};

struct PlotBundle {
  const Trajectory* trajectory = nullptr;
  const FspVerdict* verdict = nullptr;
  const std::vector<SweepPoint>* sweep = nullptr;
  std::string sweep_axis;
  std::vector<EstimateReport> reports;
  std::optional<FitWindow> fit;
};

// Plot-ready .dat files plus plot.gp for whatever the bundle carries.
// Writes nothing for an empty bundle.  Returns the files written.
std::vector<std::filesystem::path> emit_plots(const PlotBundle& bundle, const std::filesystem::path& dir);

} // namespace thinfilm
