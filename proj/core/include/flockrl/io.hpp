#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "flockrl/lq.hpp"
#include "flockrl/scenario.hpp"
#include "flockrl/sim.hpp"

namespace flockrl {

// Scenario files are JSON documents with a schema_version field. Unknown
// keys are rejected so typos surface as schema errors.
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

void write_trajectory_csv(std::ostream& out, const RunResult& result);
void write_metrics_csv(std::ostream& out, const RunResult& result);
void write_weights_csv(std::ostream& out, const std::vector<WeightsRow>& rows);

// Per-step records of a single-axis learning run, as weights rows.
std::vector<WeightsRow> weights_rows(const LearningRun& run);

// First step at which the convergence flag is set, or -1.
int first_converged_step(const std::vector<WeightsRow>& rows);

// JSON manifest: resolved scenario plus run metadata.
std::string run_manifest(const Scenario& scenario, const std::string& command,
                         const std::vector<std::string>& outputs);

// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

}  // namespace flockrl
