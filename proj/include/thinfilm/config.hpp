#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/solver.hpp"

namespace thinfilm {

inline constexpr const char* kToolVersion = "0.1.0";

struct GridSpec {
  int cells = 256;
  Boundary boundary = Boundary::NeumannZeroFlux;
  bool operator==(const GridSpec&) const = default;
};

struct ExperimentSpec {
  double t_end = 0.1;
  double snapshot_every = 0.01;
  double alpha = 0.5;
  std::optional<double> gamma; // default (alpha + n + 1)/3
  std::string cutoff = "one";  // one, quartic, smooth_step
  double cutoff_r = 0.5, cutoff_center = 0.0;
  double cutoff_s = 0.0, cutoff_delta = 0.25;
  std::string sweep_axis = "m";
  std::vector<double> sweep_values;
  double fsp_eps = 1e-12;
  double edge_rel_threshold = 1e-7;
  bool allow_outside_regime = false;
  double fsp_alpha = 0.5;
  int fit_window = 8;
  int fit_skip = 2; // cells next to the edge left out of the fit

  bool operator==(const ExperimentSpec&) const = default;
};

struct RunManifest {
  ModelParams params;
  GridSpec grid;
  SolverControls controls;
  InitialProfile initial;
  ExperimentSpec experiment;
  std::string tool_version = kToolVersion;
  bool deterministic = true; // no randomness anywhere in a run
  std::string created;       // caller-supplied label; never read from the clock

  void validate() const;
  Grid make_grid() const { return Grid(params.half_width, grid.cells, grid.boundary); }
  bool operator==(const RunManifest&) const = default;
};

// Sections model, grid, controls, initial, experiment (and meta).  Unknown
// sections or keys are errors.  Overrides are "key=value" with the key
// either section-qualified or unique across sections.
RunManifest parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunManifest load_config(const std::string& path, const std::vector<std::string>& overrides = {});

std::string serialize_manifest(const RunManifest& m);

// FNV-1a 64 of the serialized manifest, as 16 hex digits.
std::string manifest_digest(const RunManifest& m);

// Every "section.key" the parser accepts.
std::vector<std::string> config_keys();

std::string format_double(double x);
double parse_double(const std::string& text, const std::string& name);
std::vector<double> parse_double_list(const std::string& text, const std::string& name);

} // namespace thinfilm
