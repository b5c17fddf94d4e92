// Python bindings for the simulation core.

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "simcouple/bundle.hpp"
#include "simcouple/errors.hpp"
#include "simcouple/scenario.hpp"
#include "simcouple/trace.hpp"

namespace py = pybind11;
using namespace simcouple;

namespace {

Vec3 vec_from(const py::sequence& s) {
  if (py::len(s) != 3) {
    throw py::value_error("expected a sequence of 3 numbers");
  }
  return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

// (n, 14) rows in trace CSV column order.
py::array_t<double> trace_array(const MotionTrace& trace) {
  py::array_t<double> out({trace.samples.size(), std::size_t{14}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const BodySample& s = trace.samples[i];
    const double row[14] = {s.t,
                            s.position.x,
                            s.position.y,
                            s.position.z,
                            s.orientation.w,
                            s.orientation.x,
                            s.orientation.y,
                            s.orientation.z,
                            s.linear_velocity.x,
                            s.linear_velocity.y,
                            s.linear_velocity.z,
                            s.angular_velocity.x,
                            s.angular_velocity.y,
                            s.angular_velocity.z};
    for (py::ssize_t j = 0; j < 14; ++j) a(static_cast<py::ssize_t>(i), j) = row[j];
  }
  return out;
}

std::vector<Override> overrides_from(const py::dict& d) {
  std::vector<Override> out;
  for (const auto& [k, v] : d) {
    out.emplace_back(py::str(k), py::str(v));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_simcouple, m) {
  m.doc() = "Coupled rigid-body / mass-spring simulation";

  auto sim_error = py::register_exception<SimError>(m, "SimError");
  py::register_exception<ParseError>(m, "ParseError", sim_error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", sim_error.ptr());
  py::register_exception<InstabilityError>(m, "InstabilityError", sim_error.ptr());
  py::register_exception<DegenerateContactError>(m, "DegenerateContactError", sim_error.ptr());
  py::register_exception<DegenerateSpringError>(m, "DegenerateSpringError", sim_error.ptr());
  py::register_exception<PlaybackError>(m, "PlaybackError", sim_error.ptr());
  py::register_exception<IoError>(m, "IoError", sim_error.ptr());

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init<double, double, double>())
      .def(py::init(&vec_from))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("norm", &Vec3::norm)
      .def("to_tuple", [](const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); })
      .def(py::self == py::self)
      .def("__iter__", [](const Vec3& v) { return py::iter(py::make_tuple(v.x, v.y, v.z)); })
      .def("__repr__", [](const Vec3& v) {
        return "Vec3(" + format_exact(v.x) + ", " + format_exact(v.y) + ", " + format_exact(v.z) + ")";
      });
  py::implicitly_convertible<py::sequence, Vec3>();

  py::enum_<CouplingKind>(m, "CouplingKind")
      .value("TWO_WAY", CouplingKind::TwoWay)
      .value("ONE_WAY", CouplingKind::OneWay)
      .value("HYBRID", CouplingKind::Hybrid);
  m.def("parse_coupling_kind", [](const std::string& s) { return parse_coupling_kind(s); });
  m.def("coupling_name", [](CouplingKind k) { return to_string(k); });

  // Elementary force laws.
  m.def("ballistic_position", &ballistic_position, py::arg("x0"), py::arg("v0"), py::arg("g"), py::arg("t"));

  py::class_<Particle>(m, "Particle")
      .def(py::init([](double mass, Vec3 position, Vec3 velocity, bool pinned) {
             return Particle{mass, position, velocity, {}, pinned};
           }),
           py::arg("mass") = 1.0, py::arg("position") = Vec3{}, py::arg("velocity") = Vec3{},
           py::arg("pinned") = false)
      .def_readwrite("mass", &Particle::mass)
      .def_readwrite("position", &Particle::position)
      .def_readwrite("velocity", &Particle::velocity)
      .def_readwrite("pinned", &Particle::pinned);

  py::class_<Spring>(m, "Spring")
      .def(py::init([](std::size_t a, std::size_t b, double rest, double k, double c, double comp) {
             return Spring{a, b, rest, k, c, comp};
           }),
           py::arg("a") = 0, py::arg("b") = 1, py::arg("rest_length") = 1.0, py::arg("stiffness") = 0.0,
           py::arg("damping") = 0.0, py::arg("compression_scale") = 1.0)
      .def_readwrite("a", &Spring::a)
      .def_readwrite("b", &Spring::b)
      .def_readwrite("rest_length", &Spring::rest_length)
      .def_readwrite("stiffness", &Spring::stiffness)
      .def_readwrite("damping", &Spring::damping)
      .def_readwrite("compression_scale", &Spring::compression_scale);
  m.def("spring_force", &spring_force, py::arg("spring"), py::arg("pa"), py::arg("pb"),
        "Forces on the two endpoints as (f_a, f_b).");

  py::class_<Material>(m, "Material")
      .def_readonly("name", &Material::name)
      .def_readonly("stiffness", &Material::stiffness)
      .def_readonly("shear_ratio", &Material::shear_ratio)
      .def_readonly("bend_ratio", &Material::bend_ratio)
      .def_readonly("damping", &Material::damping)
      .def_readonly("global_damping", &Material::global_damping)
      .def_readonly("compression_scale", &Material::compression_scale)
      .def_readonly("total_mass", &Material::total_mass);
  m.def("material_preset", &material_preset);
  m.def("material_preset_names", &material_preset_names);

  py::class_<ContactForceModel>(m, "ContactForceModel")
      .def(py::init([](double k_constraint, double c_damp, double k_restore, double mu) {
             return ContactForceModel{k_constraint, c_damp, k_restore, mu};
           }),
           py::arg("k_constraint") = 50.0, py::arg("c_damp") = 2.0, py::arg("k_restore") = 2000.0,
           py::arg("mu") = 0.5)
      .def_readwrite("k_constraint", &ContactForceModel::k_constraint)
      .def_readwrite("c_damp", &ContactForceModel::c_damp)
      .def_readwrite("k_restore", &ContactForceModel::k_restore)
      .def_readwrite("mu", &ContactForceModel::mu);

  py::class_<Contact>(m, "Contact")
      .def(py::init([](std::size_t particle, Vec3 normal, double depth, Vec3 point, Vec3 rel) {
             return Contact{particle, normal, depth, point, rel};
           }),
           py::arg("particle") = 0, py::arg("normal") = Vec3{0, 1, 0}, py::arg("depth") = 0.0,
           py::arg("point") = Vec3{}, py::arg("relative_velocity") = Vec3{})
      .def_readonly("particle", &Contact::particle)
      .def_readonly("normal", &Contact::normal)
      .def_readonly("depth", &Contact::depth)
      .def_readonly("point", &Contact::point)
      .def_readonly("relative_velocity", &Contact::relative_velocity);
  m.def("detect_point_sphere", &detect_point_sphere, py::arg("point"), py::arg("center"), py::arg("radius"));
  m.def("contact_force", &contact_force, py::arg("contact"), py::arg("model") = ContactForceModel{},
        "Force on the secondary particle.");
  m.def("coulomb_clamp", &coulomb_clamp, py::arg("f_tangential"), py::arg("f_normal"), py::arg("mu"));

  // Interaction statistics and the coupling advisor.
  py::class_<InteractionRecord>(m, "InteractionRecord")
      .def(py::init([](double t, Vec3 force, int count) {
             InteractionRecord r;
             r.t = t;
             r.force_on_primary = force;
             r.contact_count = count;
             return r;
           }),
           py::arg("t"), py::arg("force_on_primary"), py::arg("contact_count"))
      .def_readonly("t", &InteractionRecord::t)
      .def_readonly("force_on_primary", &InteractionRecord::force_on_primary)
      .def_readonly("contact_count", &InteractionRecord::contact_count)
      .def_readonly("max_depth", &InteractionRecord::max_depth)
      .def_readonly("cone_excess", &InteractionRecord::cone_excess);

  py::class_<InteractionStats>(m, "InteractionStats")
      .def(py::init<>())
      .def(py::init([](double accel_mean) {
             InteractionStats s;
             s.accel_mean = accel_mean;
             return s;
           }),
           py::arg("accel_mean"))
      .def_readonly("force_min", &InteractionStats::force_min)
      .def_readonly("force_max", &InteractionStats::force_max)
      .def_readonly("force_mean", &InteractionStats::force_mean)
      .def_readonly("accel_min", &InteractionStats::accel_min)
      .def_readonly("accel_max", &InteractionStats::accel_max)
      .def_readonly("accel_mean", &InteractionStats::accel_mean)
      .def_readonly("window_start", &InteractionStats::window_start)
      .def_readonly("window_end", &InteractionStats::window_end)
      .def_readonly("contact_fraction", &InteractionStats::contact_fraction)
      .def_readonly("samples", &InteractionStats::samples)
      .def_readonly("sustained", &InteractionStats::sustained)
      .def_property_readonly("has_contact", &InteractionStats::has_contact);
  m.def(
      "summarize_interaction",
      [](const std::vector<InteractionRecord>& log, double mass) { return summarize_interaction(log, mass); },
      py::arg("log"), py::arg("primary_mass"));

  py::class_<Recommendation>(m, "Recommendation")
      .def_readonly("mode", &Recommendation::mode)
      .def_readonly("no_compromise", &Recommendation::no_compromise)
      .def_readonly("rationale", &Recommendation::rationale);
  m.def(
      "recommend_coupling",
      [](const InteractionStats& stats, bool important, bool one_way_stable, bool stand_in, bool affordable,
         double threshold) {
        return recommend_coupling({stats, important, one_way_stable, stand_in, affordable}, threshold);
      },
      py::arg("stats"), py::arg("contextually_important") = true, py::arg("secondary_stable_under_one_way") = true,
      py::arg("stand_in_available") = false, py::arg("two_way_cost_acceptable") = true,
      py::arg("accel_threshold") = kDefaultAccelThreshold);

  // Scenarios and runs.
  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("output_interval", &Scenario::output_interval)
      .def_property_readonly("primary_mass", [](const Scenario& s) { return s.primary.mass; })
      .def("to_yaml", &serialize_scenario)
      .def(py::self == py::self);
  m.def(
      "load_scenario", [](const std::string& text, const py::dict& o) { return load_scenario(text, overrides_from(o)); },
      py::arg("text"), py::arg("overrides") = py::dict());
  m.def(
      "load_scenario_file",
      [](const std::string& path, const py::dict& o) { return load_scenario_file(path, overrides_from(o)); },
      py::arg("path"), py::arg("overrides") = py::dict());

  py::class_<RunArtifacts>(m, "RunResult")
      .def_readonly("mode", &RunArtifacts::mode)
      .def_readonly("stats", &RunArtifacts::stats)
      .def_readonly("primary_mass", &RunArtifacts::primary_mass)
      .def_readonly("secondary_mass", &RunArtifacts::secondary_mass)
      .def_property_readonly("completed", [](const RunArtifacts& r) { return !r.result.status.unstable(); })
      .def_property_readonly("status", [](const RunArtifacts& r) { return status_line(r.result.status); })
      .def_property_readonly("primary_trace", [](const RunArtifacts& r) { return trace_array(r.result.primary); })
      .def_property_readonly("primary_fine_trace",
                             [](const RunArtifacts& r) { return trace_array(r.result.primary_fine); })
      .def_property_readonly("interaction_log", [](const RunArtifacts& r) { return r.result.log; })
      .def_property_readonly("exit_horizontal_speed",
                             [](const RunArtifacts& r) { return exit_horizontal_speed(r.result.primary); })
      .def_property_readonly("max_secondary_displacement",
                             [](const RunArtifacts& r) { return r.result.max_secondary_displacement; })
      .def_property_readonly("constraint_violations",
                             [](const RunArtifacts& r) { return r.result.constraint_violations; })
      .def_property_readonly("wall_seconds", [](const RunArtifacts& r) { return r.result.wall_total_seconds; });

  m.def(
      "run_scenario",
      [](const Scenario& s, std::optional<CouplingKind> mode) {
        py::gil_scoped_release release;
        return run_scenario(s, mode);
      },
      py::arg("scenario"), py::arg("mode") = py::none());
  m.def("write_run_bundle", &write_run_bundle, py::arg("dir"), py::arg("scenario"), py::arg("run"));
}
