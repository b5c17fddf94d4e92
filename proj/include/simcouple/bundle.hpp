#pragma once

#include <filesystem>
#include <string>

#include "simcouple/scenario.hpp"

namespace simcouple {

/// Writes a run's output bundle into `dir` (created if missing):
/// primary_trace.csv, secondary_trace.csv, interaction_log.csv, stats.txt,
/// stats.csv, status.txt and the resolved scenario.yaml. Contents depend only
/// on the run, so identical runs give identical bundles. Throws IoError on
/// I/O failure.
void write_run_bundle(const std::filesystem::path& dir, const Scenario& scenario, const RunArtifacts& run);

/// One line: "completed t_end=..." or "unstable t=... entity=... reason".
std::string status_line(const RunStatus& status);

}  // namespace simcouple
