// simcouple command-line tool: run, compare, advise, dump-mesh.
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 validation error,
// 4 instability abort, 5 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "simcouple/bundle.hpp"
#include "simcouple/errors.hpp"
#include "simcouple/scenario.hpp"
#include "simcouple/trace.hpp"

namespace fs = std::filesystem;
using namespace simcouple;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kUnstable = 4, kIo = 5 };

struct CommonOptions {
  std::string scenario;
  std::string out;
  std::vector<std::string> sets;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<long> seed;  // reserved; the engine has no randomness
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario YAML file")->required();
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--set", o.sets, "Override as dotted.key=value (repeatable)");
  cmd->add_option("--dt", o.dt, "Time step for both systems (s)");
  cmd->add_option("--duration", o.duration, "Simulated duration (s)");
  cmd->add_option("--seed", o.seed, "Reserved; runs are deterministic");
}

std::vector<Override> overrides_of(const CommonOptions& o) {
  std::vector<Override> out;
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("--set expects key=value, got '" + s + "'");
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.dt) {
    out.emplace_back("primary.dt", format_exact(*o.dt));
    out.emplace_back("secondary.dt", format_exact(*o.dt));
  }
  if (o.duration) {
    out.emplace_back("duration", format_exact(*o.duration));
  }
  return out;
}

Scenario load(const CommonOptions& o) {
  if (!fs::exists(o.scenario)) {
    throw ParseError("scenario file not found: " + o.scenario);
  }
  return load_scenario_file(o.scenario, overrides_of(o));
}

int cmd_run(const CommonOptions& o) {
  const Scenario s = load(o);
  const RunArtifacts run = run_scenario(s);
  write_run_bundle(o.out, s, run);
  std::cout << s.name << " [" << to_string(run.mode) << "]: " << status_line(run.result.status) << '\n'
            << "wall clock: " << run.result.wall_total_seconds << " s\n";
  if (run.result.status.unstable()) {
    std::cerr << "error: simulation became unstable; partial outputs written to " << o.out << '\n';
    return kUnstable;
  }
  return kOk;
}

int cmd_compare(const CommonOptions& o) {
  const Scenario s = load(o);
  fs::create_directories(o.out);
  std::ofstream summary(fs::path(o.out) / "summary.csv");
  if (!summary) {
    throw IoError("cannot write " + (fs::path(o.out) / "summary.csv").string());
  }
  summary << "mode,status,exit_horizontal_speed,max_secondary_displacement,constraint_violations,"
             "wall_primary_s,wall_secondary_s,wall_total_s\n";
  int code = kOk;
  for (CouplingKind kind : {CouplingKind::TwoWay, CouplingKind::OneWay, CouplingKind::Hybrid}) {
    if (kind == CouplingKind::Hybrid && !s.stand_in) {
      std::cout << "hybrid: skipped (no stand_in configured)\n";
      continue;
    }
    const RunArtifacts run = run_scenario(s, kind);
    const std::string name = to_string(kind);
    write_run_bundle(fs::path(o.out) / name, s, run);
    {
      std::ofstream traj(fs::path(o.out) / (name + "_primary_trace.csv"));
      write_trace_csv(traj, run.result.primary);
    }
    const CouplingResult& r = run.result;
    const std::string exit_speed = r.primary.empty() ? "" : format_exact(exit_horizontal_speed(r.primary));
    summary << name << ',' << (r.status.unstable() ? "unstable" : "completed") << ',' << exit_speed << ','
            << format_exact(r.max_secondary_displacement) << ',' << r.constraint_violations << ','
            << r.wall_primary_seconds << ',' << r.wall_secondary_seconds << ',' << r.wall_total_seconds << '\n';
    std::cout << name << ": exit speed " << exit_speed << " m/s, max displacement "
              << r.max_secondary_displacement << " m, wall " << r.wall_total_seconds << " s\n";
    if (r.status.unstable()) {
      code = kUnstable;
    }
  }
  return code;
}

struct AdviseOptions {
  std::string log;
  double mass = 0.0;
  double threshold = kDefaultAccelThreshold;
  bool not_important = false;
  bool one_way_unstable = false;
  bool stand_in_available = false;
  bool two_way_too_costly = false;
};

int cmd_advise(const AdviseOptions& o) {
  std::ifstream in(o.log);
  if (!in) {
    throw ParseError("cannot read interaction log: " + o.log);
  }
  const std::vector<InteractionRecord> log = read_interaction_csv(in);
  if (!(o.mass > 0.0)) {
    throw ValidationError("--mass must be positive");
  }
  const InteractionStats stats = log.empty() ? InteractionStats{} : summarize_interaction(log, o.mass);
  if (!stats.has_contact()) {
    std::cout << "no interaction detected; OneWay trivially sufficient\n";
    return kOk;
  }
  std::cout << kTableHeader << '\n';
  TableRowLabels labels;
  labels.primary = o.log;
  labels.secondary = "-";
  std::cout << table_row(stats, o.mass, labels) << '\n';

  AdvisorInput input;
  input.stats = stats;
  input.contextually_important = !o.not_important;
  input.secondary_stable_under_one_way = !o.one_way_unstable;
  input.stand_in_available = o.stand_in_available;
  input.two_way_cost_acceptable = !o.two_way_too_costly;
  const Recommendation rec = recommend_coupling(input, o.threshold);
  std::cout << "recommendation: " << to_string(rec.mode) << '\n' << "rationale: " << rec.rationale << '\n';
  if (rec.no_compromise) {
    std::cout << "warning: no coupling gives a reasonable compromise\n";
  }
  return kOk;
}

int cmd_dump_mesh(const CommonOptions& o) {
  const Scenario s = load(o);
  const MassSpringSystem sys = build_secondary(s);
  fs::create_directories(o.out);
  std::ofstream particles(fs::path(o.out) / "particles.csv");
  std::ofstream springs(fs::path(o.out) / "springs.csv");
  std::ofstream triangles(fs::path(o.out) / "triangles.csv");
  if (!particles || !springs || !triangles) {
    throw IoError("cannot write mesh files under " + o.out);
  }
  particles << "particle,x,y,z,mass,pinned\n";
  for (std::size_t i = 0; i < sys.particles.size(); ++i) {
    const Particle& p = sys.particles[i];
    particles << i << ',' << format_exact(p.position.x) << ',' << format_exact(p.position.y) << ','
              << format_exact(p.position.z) << ',' << format_exact(p.mass) << ',' << (p.pinned ? 1 : 0) << '\n';
  }
  springs << "a,b,rest_length,stiffness,damping\n";
  for (const Spring& sp : sys.springs) {
    springs << sp.a << ',' << sp.b << ',' << format_exact(sp.rest_length) << ',' << format_exact(sp.stiffness)
            << ',' << format_exact(sp.damping) << '\n';
  }
  triangles << "a,b,c\n";
  for (const Triangle& t : sys.triangles) {
    triangles << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  }
  std::cout << sys.particles.size() << " particles, " << sys.springs.size() << " springs, "
            << sys.triangles.size() << " triangles\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled rigid-body / mass-spring simulation runner"};
  app.require_subcommand(1);

  CommonOptions run_opts, compare_opts, mesh_opts;
  AdviseOptions advise_opts;
  auto* run = app.add_subcommand("run", "Run a scenario and write its output bundle");
  add_common(run, run_opts);
  auto* compare = app.add_subcommand("compare", "Run a scenario under all three couplings");
  add_common(compare, compare_opts);
  auto* mesh = app.add_subcommand("dump-mesh", "Write the secondary system's rest mesh");
  add_common(mesh, mesh_opts);
  auto* advise = app.add_subcommand("advise", "Summarize an interaction log and recommend a coupling");
  advise->add_option("--log", advise_opts.log, "Interaction log CSV")->required();
  advise->add_option("--mass", advise_opts.mass, "Primary mass (kg)")->required();
  advise->add_option("--threshold", advise_opts.threshold, "Negligible mean acceleration (m/s^2)");
  advise->add_flag("--not-important", advise_opts.not_important, "Interaction is contextually unimportant");
  advise->add_flag("--one-way-unstable", advise_opts.one_way_unstable, "Secondary is unstable when driven one-way");
  advise->add_flag("--stand-in-available", advise_opts.stand_in_available, "A stand-in model exists");
  advise->add_flag("--two-way-too-costly", advise_opts.two_way_too_costly, "Two-way cost is not acceptable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*compare) return cmd_compare(compare_opts);
    if (*advise) return cmd_advise(advise_opts);
    if (*mesh) return cmd_dump_mesh(mesh_opts);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kUnstable;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kUsage;
}
