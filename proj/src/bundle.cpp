#include "simcouple/bundle.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "simcouple/errors.hpp"
#include "simcouple/trace.hpp"

namespace simcouple {

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  body(out);
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

std::string primary_label(const Scenario& s) {
  switch (s.primary.shape) {
    case PrimaryShape::Sphere: return s.name + ":sphere";
    case PrimaryShape::Box: return s.name + ":box";
    case PrimaryShape::None: break;
  }
  return "none";
}

}  // namespace

std::string status_line(const RunStatus& status) {
  std::ostringstream out;
  if (!status.unstable()) {
    out << "completed t_end=" << format_exact(status.t_end) << " steps=" << status.steps_taken;
    return out.str();
  }
  const Instability& bad = *status.instability;
  out << "unstable t=" << format_exact(status.t_end) << " system=" << (bad.in_primary ? "primary" : "secondary");
  if (!bad.in_primary) {
    out << " entity=" << bad.entity;
  }
  out << " reason=" << bad.reason;
  return out.str();
}

void write_run_bundle(const std::filesystem::path& dir, const Scenario& scenario, const RunArtifacts& run) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  const CouplingResult& r = run.result;
  write_file(dir / "scenario.yaml", [&](std::ostream& o) { o << serialize_scenario(scenario); });
  write_file(dir / "primary_trace.csv", [&](std::ostream& o) { write_trace_csv(o, r.primary); });
  write_file(dir / "secondary_trace.csv", [&](std::ostream& o) { write_secondary_csv(o, r.secondary); });
  write_file(dir / "interaction_log.csv", [&](std::ostream& o) { write_interaction_csv(o, r.log); });
  write_file(dir / "status.txt", [&](std::ostream& o) { o << status_line(r.status) << '\n'; });
  write_file(dir / "stats.txt", [&](std::ostream& o) {
    o << "mode: " << to_string(run.mode) << '\n';
    if (run.stats.has_contact()) {
      write_stats_report(o, run.stats, run.primary_mass);
    } else {
      o << "contact: none\n";
    }
    o << "max_secondary_displacement: " << format_exact(r.max_secondary_displacement) << '\n';
    o << "constraint_violations: " << r.constraint_violations << '\n';
    if (!r.primary.empty()) {
      o << "exit_horizontal_speed: " << format_exact(exit_horizontal_speed(r.primary)) << '\n';
    }
  });
  write_file(dir / "stats.csv", [&](std::ostream& o) {
    o << kTableHeader << '\n';
    TableRowLabels labels;
    labels.primary = primary_label(scenario);
    labels.secondary = scenario.secondary.kind == SecondaryKind::None ? "none" : scenario.secondary.material;
    labels.secondary_mass = run.secondary_mass;
    o << table_row(run.stats, run.primary_mass, labels) << '\n';
  });
}

}  // namespace simcouple
