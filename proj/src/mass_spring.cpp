#include "simcouple/mass_spring.hpp"

#include <cmath>
#include <numbers>

#include "simcouple/errors.hpp"
#include "simcouple/sim_core.hpp"

namespace simcouple {

namespace {

constexpr double kMinSpringLength = 1e-12;

Spring make_spring(const MassSpringSystem& sys, std::size_t a, std::size_t b, double k, double c,
                   double compression_scale = 1.0) {
  const double rest = (sys.particles[b].position - sys.particles[a].position).norm();
  return Spring{a, b, rest, k, c, compression_scale};
}

Vec3 unit_or_throw(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError(std::string(what) + " must be a non-zero finite vector");
  }
  return v / n;
}

}  // namespace

Material material_preset(const std::string& name) {
  // Stiffness and damping are declared approximations. Axial damping is kept
  // at or above stiffness * 1e-4 so that spring energy decays monotonically
  // at every step size up to 1e-4 s.
  if (name == "nylon-net") {
    return Material{name, 300.0, 0.3, 0.0, 0.05, 0.1, 1.0, 0.03};
  }
  if (name == "nylon-net-soft") {
    return Material{name, 3.0, 0.3, 0.0, 0.001, 0.1, 1.0, 0.03};
  }
  if (name == "cloth") {
    return Material{name, 200.0, 0.5, 0.2, 0.05, 0.1, 1.0, 0.1};
  }
  if (name == "bungee") {
    return Material{name, 1400.0, 0.0, 0.0, 2.0, 0.1, 0.01, 1.0};
  }
  if (name == "mat") {
    return Material{name, 2000.0, 0.5, 0.2, 1.0, 0.5, 1.0, 2.0};
  }
  throw ValidationError("unknown material preset '" + name + "'");
}

std::vector<std::string> material_preset_names() {
  return {"nylon-net", "nylon-net-soft", "cloth", "bungee", "mat"};
}

double MassSpringSystem::free_mass() const {
  double m = 0.0;
  for (const auto& p : particles) {
    if (!p.pinned) {
      m += p.mass;
    }
  }
  return m;
}

Vec3 MassSpringSystem::free_momentum() const {
  Vec3 total;
  for (const auto& p : particles) {
    if (!p.pinned) {
      total += p.velocity * p.mass;
    }
  }
  return total;
}

double MassSpringSystem::kinetic_energy() const {
  double e = 0.0;
  for (const auto& p : particles) {
    e += 0.5 * p.mass * p.velocity.squared_norm();
  }
  return e;
}

double MassSpringSystem::spring_energy() const {
  double e = 0.0;
  for (const auto& s : springs) {
    const double ext = (particles[s.b].position - particles[s.a].position).norm() - s.rest_length;
    const double k = ext < 0.0 ? s.stiffness * s.compression_scale : s.stiffness;
    e += 0.5 * k * ext * ext;
  }
  return e;
}

std::vector<Vec3> MassSpringSystem::positions() const {
  std::vector<Vec3> out;
  out.reserve(particles.size());
  for (const auto& p : particles) {
    out.push_back(p.position);
  }
  return out;
}

void validate(const MassSpringSystem& system) {
  const std::size_t n = system.particles.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(system.particles[i].mass > 0.0)) {
      throw ValidationError("particle " + std::to_string(i) + " has non-positive mass");
    }
  }
  for (const auto& s : system.springs) {
    if (s.a >= n || s.b >= n || s.a == s.b) {
      throw ValidationError("spring endpoints out of range or identical");
    }
    if (!(s.rest_length > 0.0) || s.stiffness < 0.0 || s.damping < 0.0 || s.compression_scale < 0.0) {
      throw ValidationError("spring parameters out of range");
    }
  }
  for (const auto& t : system.triangles) {
    for (auto i : t) {
      if (i >= n) {
        throw ValidationError("triangle references a missing particle");
      }
    }
  }
  for (const auto& a : system.anchors) {
    if (a.particle >= n || !system.particles[a.particle].pinned) {
      throw ValidationError("anchor must reference a pinned particle");
    }
  }
  if (system.global_damping < 0.0) {
    throw ValidationError("global damping must be non-negative");
  }
}

std::pair<Vec3, Vec3> spring_force(const Spring& spring, const Particle& pa, const Particle& pb) {
  const Vec3 d = pb.position - pa.position;
  const double len = d.norm();
  if (!(len > kMinSpringLength)) {
    throw DegenerateSpringError("spring endpoints coincide; direction undefined");
  }
  const Vec3 dir = d / len;
  const double ext = len - spring.rest_length;
  const double k = ext < 0.0 ? spring.stiffness * spring.compression_scale : spring.stiffness;
  const double rate = (pb.velocity - pa.velocity).dot(dir);
  const Vec3 f = dir * (k * ext + spring.damping * rate);
  return {f, -f};
}

MassSpringStepReport step_mass_spring(MassSpringSystem& system, const GravityModel& gravity,
                                      std::span<const Vec3> external_forces, double dt) {
  auto& ps = system.particles;
  if (!external_forces.empty() && external_forces.size() != ps.size()) {
    throw ValidationError("external force array does not match particle count");
  }
  for (std::size_t i = 0; i < external_forces.size(); ++i) {
    ps[i].force_accum += external_forces[i];
  }
  for (const auto& s : system.springs) {
    Vec3 fa, fb;
    try {
      std::tie(fa, fb) = spring_force(s, ps[s.a], ps[s.b]);
    } catch (const DegenerateSpringError&) {
      throw InstabilityError("spring collapsed to zero length", s.b);
    }
    ps[s.a].force_accum += fa;
    ps[s.b].force_accum += fb;
  }

  MassSpringStepReport report;
  const double cg = system.global_damping;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Particle& p = ps[i];
    if (p.pinned) {
      report.anchor_force -= p.force_accum;
      p.force_accum = kZero;
      continue;
    }
    const Vec3 damping = p.velocity * (-cg * p.mass);
    report.damping_force += damping;
    p.force_accum += damping;
    const Vec3 accel = p.force_accum / p.mass + gravity.g;
    try {
      step_semi_implicit(p.position, p.velocity, accel, dt);
    } catch (const InstabilityError& e) {
      throw InstabilityError(e.what(), i);
    }
    p.force_accum = kZero;
  }
  return report;
}

MassSpringSystem build_net(const NetParams& params, const Material& material) {
  if (params.rings < 2 || params.spokes < 3) {
    throw ValidationError("net requires rings >= 2 and spokes >= 3");
  }
  if (!(params.rim_radius > 0.0) || !(params.depth > 0.0) || !(params.attach_gap > 0.0) ||
      params.taper < 0.0 || params.taper >= 1.0) {
    throw ValidationError("net dimensions out of range");
  }
  if (!(material.total_mass > 0.0)) {
    throw ValidationError("net mass must be positive");
  }
  const auto rings = static_cast<std::size_t>(params.rings);
  const auto spokes = static_cast<std::size_t>(params.spokes);
  const std::size_t lattice = rings * spokes;
  const double particle_mass = material.total_mass / static_cast<double>(lattice);
  const auto idx = [spokes](std::size_t ring, std::size_t spoke) { return ring * spokes + spoke % spokes; };

  MassSpringSystem sys;
  sys.global_damping = material.global_damping;
  sys.particles.reserve(lattice + spokes);
  for (std::size_t i = 0; i < rings; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(rings - 1);
    const double r = params.rim_radius * (1.0 - params.taper * frac);
    const double y = -params.attach_gap - params.depth * frac;
    for (std::size_t j = 0; j < spokes; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spokes);
      Particle p;
      p.mass = particle_mass;
      p.position = params.rim_center + Vec3{r * std::cos(theta), y, r * std::sin(theta)};
      sys.particles.push_back(p);
    }
  }
  for (std::size_t j = 0; j < spokes; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spokes);
    Particle p;
    p.mass = particle_mass;
    p.pinned = true;
    p.position = params.rim_center + Vec3{params.rim_radius * std::cos(theta), 0.0,
                                          params.rim_radius * std::sin(theta)};
    sys.anchors.push_back({sys.particles.size(), p.position});
    sys.particles.push_back(p);
  }

  const double k = material.stiffness;
  const double k_shear = k * material.shear_ratio;
  const double c = material.damping;
  for (std::size_t i = 0; i < rings; ++i) {
    for (std::size_t j = 0; j < spokes; ++j) {
      sys.springs.push_back(make_spring(sys, idx(i, j), idx(i, j + 1), k, c));
    }
  }
  for (std::size_t i = 0; i + 1 < rings; ++i) {
    for (std::size_t j = 0; j < spokes; ++j) {
      sys.springs.push_back(make_spring(sys, idx(i, j), idx(i + 1, j), k, c));
    }
  }
  for (std::size_t i = 0; i + 1 < rings; ++i) {
    for (std::size_t j = 0; j < spokes; ++j) {
      sys.springs.push_back(make_spring(sys, idx(i, j), idx(i + 1, j + 1), k_shear, c));
      sys.springs.push_back(make_spring(sys, idx(i, j + 1), idx(i + 1, j), k_shear, c));
    }
  }
  for (std::size_t j = 0; j < spokes; ++j) {
    sys.springs.push_back(make_spring(sys, lattice + j, idx(0, j), k, c));
  }
  for (std::size_t i = 0; i + 1 < rings; ++i) {
    for (std::size_t j = 0; j < spokes; ++j) {
      sys.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
      sys.triangles.push_back({idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1)});
    }
  }
  return sys;
}

MassSpringSystem build_grid(const GridParams& params, const Material& material) {
  if (params.rows < 2 || params.cols < 2) {
    throw ValidationError("grid requires rows >= 2 and cols >= 2");
  }
  if (!(params.width > 0.0) || !(params.height > 0.0) || !(material.total_mass > 0.0)) {
    throw ValidationError("grid dimensions and mass must be positive");
  }
  const Vec3 u = unit_or_throw(params.width_axis, "width_axis");
  const Vec3 v = unit_or_throw(params.height_axis, "height_axis");
  const auto rows = static_cast<std::size_t>(params.rows);
  const auto cols = static_cast<std::size_t>(params.cols);
  const auto idx = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  const double du = params.width / static_cast<double>(cols - 1);
  const double dv = params.height / static_cast<double>(rows - 1);

  MassSpringSystem sys;
  sys.global_damping = material.global_damping;
  const double particle_mass = material.total_mass / static_cast<double>(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      Particle p;
      p.mass = particle_mass;
      p.position = params.origin + u * (du * static_cast<double>(c)) + v * (dv * static_cast<double>(r));
      const bool corner = (r == 0 || r == rows - 1) && (c == 0 || c == cols - 1);
      switch (params.pinned_edge) {
        case PinnedEdge::None: break;
        case PinnedEdge::Top: p.pinned = r == 0; break;
        case PinnedEdge::Left: p.pinned = c == 0; break;
        case PinnedEdge::AllCorners: p.pinned = corner; break;
      }
      if (p.pinned) {
        sys.anchors.push_back({sys.particles.size(), p.position});
      }
      sys.particles.push_back(p);
    }
  }

  const double k = material.stiffness;
  const double c = material.damping;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t col = 0; col + 1 < cols; ++col) {
      sys.springs.push_back(make_spring(sys, idx(r, col), idx(r, col + 1), k, c));
    }
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t col = 0; col < cols; ++col) {
      sys.springs.push_back(make_spring(sys, idx(r, col), idx(r + 1, col), k, c));
    }
  }
  const double k_shear = k * material.shear_ratio;
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t col = 0; col + 1 < cols; ++col) {
      sys.springs.push_back(make_spring(sys, idx(r, col), idx(r + 1, col + 1), k_shear, c));
      sys.springs.push_back(make_spring(sys, idx(r, col + 1), idx(r + 1, col), k_shear, c));
    }
  }
  const double k_bend = k * material.bend_ratio;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t col = 0; col + 2 < cols; ++col) {
      sys.springs.push_back(make_spring(sys, idx(r, col), idx(r, col + 2), k_bend, c));
    }
  }
  for (std::size_t r = 0; r + 2 < rows; ++r) {
    for (std::size_t col = 0; col < cols; ++col) {
      sys.springs.push_back(make_spring(sys, idx(r, col), idx(r + 2, col), k_bend, c));
    }
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t col = 0; col + 1 < cols; ++col) {
      sys.triangles.push_back({idx(r, col), idx(r + 1, col), idx(r, col + 1)});
      sys.triangles.push_back({idx(r, col + 1), idx(r + 1, col), idx(r + 1, col + 1)});
    }
  }
  return sys;
}

MassSpringSystem build_cord(const CordParams& params, const Material& material) {
  if (params.segments < 1 || !(params.length > 0.0) || !(material.total_mass > 0.0)) {
    throw ValidationError("cord requires segments >= 1, positive length and mass");
  }
  const Vec3 dir = unit_or_throw(params.direction, "cord direction");
  const double extent = params.initial_extent > 0.0 ? params.initial_extent : params.length;
  const auto n = static_cast<std::size_t>(params.segments) + 1;
  const double rest = params.length / static_cast<double>(params.segments);
  const double spacing = extent / static_cast<double>(params.segments);
  // A cord shorter than its length is laid out as a zigzag with every segment
  // at rest length, so it starts slack rather than compressed.
  Vec3 side = dir.cross({0.0, 0.0, 1.0});
  if (side.norm() < 1e-6) {
    side = dir.cross({1.0, 0.0, 0.0});
  }
  side = side / side.norm();
  const double offset = spacing < rest ? std::sqrt(rest * rest - spacing * spacing) : 0.0;

  MassSpringSystem sys;
  sys.global_damping = material.global_damping;
  for (std::size_t i = 0; i < n; ++i) {
    Particle p;
    p.mass = material.total_mass / static_cast<double>(n);
    p.position = params.anchor + dir * (spacing * static_cast<double>(i)) + side * (i % 2 == 1 ? offset : 0.0);
    p.pinned = i == 0;
    sys.particles.push_back(p);
  }
  sys.anchors.push_back({0, params.anchor});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sys.springs.push_back(
        Spring{i, i + 1, rest, material.stiffness, material.damping, material.compression_scale});
  }
  return sys;
}

}  // namespace simcouple
