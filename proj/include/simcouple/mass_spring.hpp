#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simcouple/math.hpp"
#include "simcouple/rigid_body.hpp"

namespace simcouple {

struct Particle {
  double mass = 1.0;
  Vec3 position{};
  Vec3 velocity{};
  Vec3 force_accum{};
  bool pinned = false;
};

/// Linear Hooke spring with along-axis damping. Compression uses
/// stiffness * compression_scale, so a value below one models a cord that
/// goes slack instead of pushing.
struct Spring {
  std::size_t a = 0;
  std::size_t b = 0;
  double rest_length = 1.0;
  double stiffness = 0.0;
  double damping = 0.0;
  double compression_scale = 1.0;
};

/// A pinned particle and the world point it is held at.
struct Anchor {
  std::size_t particle = 0;
  Vec3 world_point{};
};

using Triangle = std::array<std::size_t, 3>;

/// Spring constants and damping shared by a family of meshes.
struct Material {
  std::string name;
  double stiffness = 100.0;  // structural springs, N/m
  double shear_ratio = 0.5;  // shear stiffness / structural stiffness
  double bend_ratio = 0.1;   // bend stiffness / structural stiffness
  double damping = 0.01;     // per-spring axial damping, N s/m
  double global_damping = 0.1;
  double compression_scale = 1.0;
  double total_mass = 0.03;  // kg, spread evenly over the mesh (net rim anchors excluded)

  friend bool operator==(const Material&, const Material&) = default;
};

/// Shipped presets: "nylon-net", "nylon-net-soft", "cloth", "bungee", "mat".
/// Throws ValidationError for unknown names.
Material material_preset(const std::string& name);
std::vector<std::string> material_preset_names();

struct MassSpringSystem {
  std::vector<Particle> particles;
  std::vector<Spring> springs;
  double global_damping = 0.1;  // 1/s
  std::vector<Anchor> anchors;
  std::vector<Triangle> triangles;

  std::size_t size() const { return particles.size(); }
  /// Sum of masses of the unpinned particles.
  double free_mass() const;
  Vec3 free_momentum() const;
  double kinetic_energy() const;
  /// Elastic energy of the springs, including the softened compression branch.
  double spring_energy() const;
  std::vector<Vec3> positions() const;
};

/// Throws ValidationError if indices are out of range or any parameter is
/// outside its domain.
void validate(const MassSpringSystem& system);

/// Force on the spring's first and second endpoint. Throws
/// DegenerateSpringError when the endpoints are closer than 1e-12 m.
std::pair<Vec3, Vec3> spring_force(const Spring& spring, const Particle& pa, const Particle& pb);

/// What one step of the secondary system exchanged with the outside world.
struct MassSpringStepReport {
  /// Force the pins exerted on the rest of the system: the negated sum of
  /// everything accumulated on pinned particles before clearing.
  Vec3 anchor_force{};
  /// Total global-damping force on free particles.
  Vec3 damping_force{};
};

/// Accumulates spring, global damping and `external_forces` (which may be
/// empty, else one entry per particle) on top of whatever is already in the
/// accumulators, adds gravity, advances free particles with semi-implicit
/// Euler and clears accumulators. Throws InstabilityError naming the first
/// particle whose state becomes non-finite.
MassSpringStepReport step_mass_spring(MassSpringSystem& system, const GravityModel& gravity,
                                      std::span<const Vec3> external_forces, double dt);

struct NetParams {
  int rings = 8;
  int spokes = 12;
  double rim_radius = 0.23;
  double depth = 0.45;
  double taper = 0.35;       // bottom radius = rim_radius * (1 - taper)
  double attach_gap = 0.02;  // length of the rim attachment springs
  Vec3 rim_center{};
  friend bool operator==(const NetParams&, const NetParams&) = default;
};

/// Tapered cylindrical net hanging below a horizontal rim. Particles are
/// numbered ring-major (ring 0 on top); the `spokes` pinned rim anchors are
/// appended after the lattice.
MassSpringSystem build_net(const NetParams& params, const Material& material);

enum class PinnedEdge { None, Top, Left, AllCorners };

struct GridParams {
  int rows = 10;
  int cols = 10;
  double width = 1.0;
  double height = 1.0;
  Vec3 origin{};                 // position of particle (row 0, col 0)
  Vec3 width_axis{1.0, 0.0, 0.0};    // columns advance along this direction
  Vec3 height_axis{0.0, -1.0, 0.0};  // rows advance along this direction
  PinnedEdge pinned_edge = PinnedEdge::None;
  friend bool operator==(const GridParams&, const GridParams&) = default;
};

/// Rectangular sheet with structural, shear and bend springs plus two
/// triangles per cell. Particle (r, c) has index r * cols + c.
MassSpringSystem build_grid(const GridParams& params, const Material& material);

struct CordParams {
  int segments = 10;
  double length = 10.0;
  Vec3 anchor{};
  Vec3 direction{0.0, -1.0, 0.0};
  /// Initial distance from the anchor to the free end. Defaults to `length`;
  /// a shorter value lays the cord out folded and slack.
  double initial_extent = -1.0;
  friend bool operator==(const CordParams&, const CordParams&) = default;
};

/// Serial chain pinned at particle 0; the last particle is the free handle.
/// With initial_extent below length the cord zigzags sideways at rest length.
MassSpringSystem build_cord(const CordParams& params, const Material& material);

inline std::size_t cord_handle(const MassSpringSystem& cord) { return cord.particles.size() - 1; }

}  // namespace simcouple
