#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sclab/observations.hpp"
#include "sclab/oracle.hpp"
#include "sclab/reconstruct.hpp"

namespace sclab {

struct TrialConfig {
  int d = 2;
  int kappa = 5;
  double b = 0.5;
  Backend backend = Backend::coverage;
  Params params;
  // Geometry; negative values are derived from params.
  int small_radius = -1;
  int window_radius = -1;
  int displacement_bound = -1;
  std::int64_t max_particles = 200'000;
  bool check_patch_event = true;
  // Keep the scenery and the phase bags in the report.
  bool keep_artifacts = false;
};

struct Geometry {
  int small_radius = 0;   // coverage window of the small level
  int window_radius = 0;  // coverage window of level n
  int scenery_radius = 0;
  int displacement_bound = 0;
  int horizon = 0;  // brw only
};

// Throws ConfigError for infeasible configurations.
Geometry resolve_geometry(const TrialConfig& c);

struct EventOutcome {
  bool pass = true;
  std::size_t violations = 0;
  std::string first;  // description of the first violation, if any
};

struct TrialReport {
  TrialConfig config;
  std::uint64_t seed = 0;
  Geometry geometry;
  std::map<std::string, EventOutcome> events;
  std::optional<EventOutcome> patch_event;  // G, when the scenery is large enough
  bool events_pass = false;
  TrialDiagnostics diag;
  std::size_t observed_L = 0;
  bool truncated = false;
  bool success = false;
  std::optional<oracle::Placement> witness;
  double wall_ms = 0;
  std::shared_ptr<const Scenery> scenery;                     // with keep_artifacts
  std::shared_ptr<const ReconstructionResult> reconstruction;  // with keep_artifacts
};

TrialReport run_trial(const TrialConfig& config, std::uint64_t seed);

nlohmann::json to_json(const TrialConfig& c);
nlohmann::json to_json(const TrialReport& r, bool with_timing = true);

struct SweepConfig {
  std::vector<int> d{2};
  std::vector<int> kappa{5};
  std::vector<double> b{0.5};
  std::vector<int> L{4};
  std::vector<int> M{9};
  std::vector<int> T1{4};
  std::vector<int> T2{16};
  std::vector<Backend> backend{Backend::coverage};
  int trials = 1;
  std::uint64_t base_seed = 1;
  TrialConfig base;
  int threads = 0;  // 0: hardware concurrency
};

struct SweepCell {
  TrialConfig config;
  std::vector<TrialReport> trials;
  std::string error;  // configuration error, no trials run
};

struct SweepResult {
  std::vector<SweepCell> cells;
};

std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index);
std::vector<TrialConfig> sweep_cells(const SweepConfig& s);
SweepResult run_sweep(const SweepConfig& s);

void write_csv(std::ostream& os, const SweepResult& r);
nlohmann::json summarize(const SweepResult& r);

// Directory for outputs: $SCLAB_OUT_DIR, else ".".
std::string default_out_dir();

}  // namespace sclab
