#include "simcouple/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <type_traits>

#include "simcouple/errors.hpp"
#include "simcouple/trace.hpp"

namespace simcouple {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) {
    return "";
  }
  return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

/// Typed access to one YAML mapping, rejecting keys it was not told about.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ParseError(label() + "expected a mapping" + where(node_));
    }
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    if (!node_ || !node_.IsMap()) {
      return;
    }
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ParseError("unknown key '" + field(key) + "'" + where(kv.first));
      }
    }
  }

  bool has(const char* key) const { return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull(); }

  Section sub(const char* key) const { return Section(has(key) ? node_[key] : YAML::Node(), field(key)); }

  double num(const char* key, double fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const YAML::Node v = node_[key];
    if (!v.IsScalar()) {
      throw ValidationError(field(key) + ": expected a number" + where(v));
    }
    try {
      return parse_double(v.Scalar());
    } catch (const ParseError&) {
      throw ValidationError(field(key) + ": expected a number, got '" + v.Scalar() + "'" + where(v));
    }
  }

  std::optional<double> opt_num(const char* key) const {
    return has(key) ? std::optional<double>(num(key, 0.0)) : std::nullopt;
  }

  long integer(const char* key, long fallback) const {
    const double v = num(key, static_cast<double>(fallback));
    if (v != static_cast<double>(static_cast<long>(v))) {
      throw ValidationError(field(key) + ": expected an integer");
    }
    return static_cast<long>(v);
  }

  bool flag(const char* key, bool fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const std::string s = text(key, "");
    if (s == "true") return true;
    if (s == "false") return false;
    throw ValidationError(field(key) + ": expected true or false" + where(node_[key]));
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const YAML::Node v = node_[key];
    if (!v.IsScalar()) {
      throw ValidationError(field(key) + ": expected a string" + where(v));
    }
    return v.Scalar();
  }

  Vec3 vec3(const char* key, const Vec3& fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const auto xs = numbers(key);
    if (xs.size() != 3) {
      throw ValidationError(field(key) + ": expected [x, y, z]" + where(node_[key]));
    }
    return {xs[0], xs[1], xs[2]};
  }

  Quat quat(const char* key, const Quat& fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const auto xs = numbers(key);
    if (xs.size() != 4) {
      throw ValidationError(field(key) + ": expected [w, x, y, z]" + where(node_[key]));
    }
    return {xs[0], xs[1], xs[2], xs[3]};
  }

  std::vector<Vec3> points(const char* key) const {
    std::vector<Vec3> out;
    if (!has(key)) {
      return out;
    }
    const YAML::Node seq = node_[key];
    if (!seq.IsSequence()) {
      throw ValidationError(field(key) + ": expected a list of [x, y, z]" + where(seq));
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      YAML::Node wrapper;
      wrapper["p"] = seq[i];
      out.push_back(Section(wrapper, field(key) + "[" + std::to_string(i) + "]").vec3("p", {}));
    }
    return out;
  }

  std::string field(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

 private:
  std::string label() const { return path_.empty() ? "" : path_ + ": "; }

  std::vector<double> numbers(const char* key) const {
    const YAML::Node seq = node_[key];
    if (!seq.IsSequence()) {
      throw ValidationError(field(key) + ": expected a list of numbers" + where(seq));
    }
    std::vector<double> out;
    for (const auto& item : seq) {
      if (!item.IsScalar()) {
        throw ValidationError(field(key) + ": expected a list of numbers" + where(item));
      }
      try {
        out.push_back(parse_double(item.Scalar()));
      } catch (const ParseError&) {
        throw ValidationError(field(key) + ": '" + item.Scalar() + "' is not a number" + where(item));
      }
    }
    return out;
  }

  YAML::Node node_;
  std::string path_;
};

PrimaryShape parse_shape(const std::string& s, const std::string& field) {
  if (s == "sphere") return PrimaryShape::Sphere;
  if (s == "box") return PrimaryShape::Box;
  if (s == "none") return PrimaryShape::None;
  throw ValidationError(field + ": unknown shape '" + s + "' (sphere, box, none)");
}

std::string shape_name(PrimaryShape s) {
  switch (s) {
    case PrimaryShape::Sphere: return "sphere";
    case PrimaryShape::Box: return "box";
    case PrimaryShape::None: return "none";
  }
  return "none";
}

SecondaryKind parse_secondary(const std::string& s, const std::string& field) {
  if (s == "net") return SecondaryKind::Net;
  if (s == "grid") return SecondaryKind::Grid;
  if (s == "cord") return SecondaryKind::Cord;
  if (s == "none") return SecondaryKind::None;
  throw ValidationError(field + ": unknown secondary kind '" + s + "' (net, grid, cord, none)");
}

std::string secondary_name(SecondaryKind k) {
  switch (k) {
    case SecondaryKind::Net: return "net";
    case SecondaryKind::Grid: return "grid";
    case SecondaryKind::Cord: return "cord";
    case SecondaryKind::None: return "none";
  }
  return "none";
}

PinnedEdge parse_edge(const std::string& s, const std::string& field) {
  if (s == "none") return PinnedEdge::None;
  if (s == "top") return PinnedEdge::Top;
  if (s == "left") return PinnedEdge::Left;
  if (s == "all-corners") return PinnedEdge::AllCorners;
  throw ValidationError(field + ": unknown pinned edge '" + s + "' (none, top, left, all-corners)");
}

std::string edge_name(PinnedEdge e) {
  switch (e) {
    case PinnedEdge::None: return "none";
    case PinnedEdge::Top: return "top";
    case PinnedEdge::Left: return "left";
    case PinnedEdge::AllCorners: return "all-corners";
  }
  return "none";
}

PrimarySpec read_primary(const Section& s) {
  s.allow({"shape", "mass", "radius", "half_extents", "inertia", "position", "orientation", "velocity",
           "angular_velocity", "dt"});
  PrimarySpec p;
  p.shape = parse_shape(s.text("shape", shape_name(p.shape)), s.field("shape"));
  p.mass = s.num("mass", p.mass);
  p.radius = s.num("radius", p.radius);
  p.half_extents = s.vec3("half_extents", p.half_extents);
  p.inertia = s.num("inertia", p.inertia);
  p.position = s.vec3("position", p.position);
  p.orientation = s.quat("orientation", p.orientation);
  p.velocity = s.vec3("velocity", p.velocity);
  p.angular_velocity = s.vec3("angular_velocity", p.angular_velocity);
  p.dt = s.num("dt", p.dt);
  return p;
}

SecondarySpec read_secondary(const Section& s) {
  s.allow({"kind", "material", "mass", "stiffness", "global_damping", "dt", "net", "grid", "cord"});
  SecondarySpec p;
  p.kind = parse_secondary(s.text("kind", secondary_name(p.kind)), s.field("kind"));
  p.material = s.text("material", p.material);
  p.mass = s.opt_num("mass");
  p.stiffness = s.opt_num("stiffness");
  p.global_damping = s.opt_num("global_damping");
  p.dt = s.num("dt", p.dt);

  const Section net = s.sub("net");
  net.allow({"rings", "spokes", "rim_radius", "depth", "taper", "attach_gap", "rim_center"});
  p.net.rings = static_cast<int>(net.integer("rings", p.net.rings));
  p.net.spokes = static_cast<int>(net.integer("spokes", p.net.spokes));
  p.net.rim_radius = net.num("rim_radius", p.net.rim_radius);
  p.net.depth = net.num("depth", p.net.depth);
  p.net.taper = net.num("taper", p.net.taper);
  p.net.attach_gap = net.num("attach_gap", p.net.attach_gap);
  p.net.rim_center = net.vec3("rim_center", p.net.rim_center);

  const Section grid = s.sub("grid");
  grid.allow({"rows", "cols", "width", "height", "origin", "width_axis", "height_axis", "pinned_edge"});
  p.grid.rows = static_cast<int>(grid.integer("rows", p.grid.rows));
  p.grid.cols = static_cast<int>(grid.integer("cols", p.grid.cols));
  p.grid.width = grid.num("width", p.grid.width);
  p.grid.height = grid.num("height", p.grid.height);
  p.grid.origin = grid.vec3("origin", p.grid.origin);
  p.grid.width_axis = grid.vec3("width_axis", p.grid.width_axis);
  p.grid.height_axis = grid.vec3("height_axis", p.grid.height_axis);
  p.grid.pinned_edge = parse_edge(grid.text("pinned_edge", edge_name(p.grid.pinned_edge)), grid.field("pinned_edge"));

  const Section cord = s.sub("cord");
  cord.allow({"segments", "length", "anchor", "direction", "initial_extent"});
  p.cord.segments = static_cast<int>(cord.integer("segments", p.cord.segments));
  p.cord.length = cord.num("length", p.cord.length);
  p.cord.anchor = cord.vec3("anchor", p.cord.anchor);
  p.cord.direction = cord.vec3("direction", p.cord.direction);
  p.cord.initial_extent = cord.num("initial_extent", p.cord.initial_extent);
  return p;
}

ContactForceModel read_contact(const Section& s) {
  s.allow({"k_constraint", "c_damp", "k_restore", "mu"});
  ContactForceModel m;
  m.k_constraint = s.num("k_constraint", m.k_constraint);
  m.c_damp = s.num("c_damp", m.c_damp);
  m.k_restore = s.num("k_restore", m.k_restore);
  m.mu = s.num("mu", m.mu);
  return m;
}

EnvironmentSpec read_environment(const Section& s) {
  s.allow({"gravity", "wind", "aero", "ground_height"});
  EnvironmentSpec e;
  e.gravity.g = s.vec3("gravity", e.gravity.g);
  e.ground_height = s.opt_num("ground_height");

  const Section wind = s.sub("wind");
  wind.allow({"uniform", "source"});
  e.wind.uniform = wind.vec3("uniform", e.wind.uniform);
  if (wind.has("source")) {
    const Section src = wind.sub("source");
    src.allow({"strength", "falloff_radius", "core_radius", "position", "follow_primary"});
    e.wind.source = true;
    e.wind.strength = src.num("strength", e.wind.strength);
    e.wind.falloff_radius = src.num("falloff_radius", e.wind.falloff_radius);
    e.wind.core_radius = src.num("core_radius", e.wind.core_radius);
    e.wind.source_position = src.vec3("position", e.wind.source_position);
    e.wind.follow_primary = src.flag("follow_primary", e.wind.follow_primary);
  }
  if (s.has("aero")) {
    const Section aero = s.sub("aero");
    aero.allow({"c_normal", "quadratic"});
    AeroModel m;
    m.c_normal = aero.num("c_normal", m.c_normal);
    m.quadratic = aero.flag("quadratic", m.quadratic);
    e.aero = m;
  }
  return e;
}

StandInSpec read_stand_in(const Section& s) {
  const std::string kind = s.text("kind", "");
  StandInSpec spec;
  if (kind == "damping_field") {
    s.allow({"kind", "c_linear", "c_angular", "region"});
    DampingFieldStandIn d;
    d.c_linear = s.num("c_linear", 0.0);
    d.c_angular = s.num("c_angular", 0.0);
    if (!s.has("region") || s.text("region", "") == "auto") {
      spec.auto_region = true;
    } else {
      const Section region = s.sub("region");
      region.allow({"box", "cylinder"});
      if (region.has("box")) {
        const Section box = region.sub("box");
        box.allow({"min", "max"});
        d.region = BoxRegion{box.vec3("min", {}), box.vec3("max", {})};
      } else if (region.has("cylinder")) {
        const Section cyl = region.sub("cylinder");
        cyl.allow({"center_x", "center_z", "radius", "y_min", "y_max"});
        CylinderRegion c;
        c.center_x = cyl.num("center_x", c.center_x);
        c.center_z = cyl.num("center_z", c.center_z);
        c.radius = cyl.num("radius", c.radius);
        c.y_min = cyl.num("y_min", c.y_min);
        c.y_max = cyl.num("y_max", c.y_max);
        d.region = c;
      } else {
        throw ValidationError(s.field("region") + ": expected 'auto', box or cylinder");
      }
    }
    spec.stand_in = d;
  } else if (kind == "spring_grid") {
    s.allow({"kind", "plane_height", "k_vertical", "c_vertical", "contact_points"});
    SpringGridStandIn g;
    g.plane_height = s.num("plane_height", 0.0);
    g.k_vertical = s.num("k_vertical", 0.0);
    g.c_vertical = s.num("c_vertical", 0.0);
    g.contact_points = s.points("contact_points");
    spec.stand_in = g;
  } else if (kind == "viscous_drag") {
    s.allow({"kind", "surface_height", "c_drag", "contact_points"});
    ViscousDragStandIn v;
    v.surface_height = s.num("surface_height", 0.0);
    v.c_drag = s.num("c_drag", 0.0);
    v.contact_points = s.points("contact_points");
    spec.stand_in = v;
  } else {
    throw ValidationError(s.field("kind") + ": expected damping_field, spring_grid or viscous_drag");
  }
  return spec;
}

AttachmentSpec read_attachment(const Section& s) {
  s.allow({"particle", "body_point", "stiffness", "damping"});
  AttachmentSpec a;
  if (s.has("particle") && s.text("particle", "") == "handle") {
    a.particle = -1;
  } else {
    a.particle = s.integer("particle", a.particle);
  }
  a.body_point = s.vec3("body_point", a.body_point);
  a.stiffness = s.num("stiffness", a.stiffness);
  a.damping = s.num("damping", a.damping);
  return a;
}

void set_override(YAML::Node& root, const std::string& key, const std::string& value) {
  if (key.empty()) {
    throw ParseError("empty override key");
  }
  YAML::Node value_node;
  try {
    value_node = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ParseError("override " + key + ": " + e.msg);
  }
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) {
      throw ParseError("malformed override key '" + key + "'");
    }
    parts.push_back(part);
  }
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (cur[parts[i]] && !cur[parts[i]].IsMap() && !cur[parts[i]].IsNull()) {
      throw ParseError("override " + key + ": '" + parts[i] + "' is not a section");
    }
    YAML::Node next = cur[parts[i]];
    cur.reset(next);
  }
  cur[parts.back()] = value_node;
}

// Emission ----------------------------------------------------------------

void emit_num(YAML::Emitter& out, const char* key, double v) { out << YAML::Key << key << YAML::Value << format_exact(v); }

void emit_vec(YAML::Emitter& out, const char* key, const Vec3& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << format_exact(v.x) << format_exact(v.y)
      << format_exact(v.z) << YAML::EndSeq;
}

void emit_points(YAML::Emitter& out, const std::vector<Vec3>& pts) {
  out << YAML::Key << "contact_points" << YAML::Value << YAML::BeginSeq;
  for (const Vec3& p : pts) {
    out << YAML::Flow << YAML::BeginSeq << format_exact(p.x) << format_exact(p.y) << format_exact(p.z) << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) {
    throw ValidationError(field + ": " + what);
  }
}

}  // namespace

CouplingKind parse_coupling_kind(std::string_view text) {
  if (text == "two_way") return CouplingKind::TwoWay;
  if (text == "one_way") return CouplingKind::OneWay;
  if (text == "hybrid") return CouplingKind::Hybrid;
  throw ValidationError("mode: unknown coupling '" + std::string(text) + "' (two_way, one_way, hybrid)");
}

Scenario load_scenario(std::string_view text, const std::vector<Override>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError("scenario: " + e.msg + " (line " + std::to_string(e.mark.line + 1) + ", column " +
                     std::to_string(e.mark.column + 1) + ")");
  }
  if (!root || root.IsNull()) {
    if (overrides.empty()) {
      throw ParseError("scenario: empty document");
    }
    root = YAML::Node(YAML::NodeType::Map);
  }
  if (!root.IsMap()) {
    throw ParseError("scenario: top level must be a mapping" + where(root));
  }
  for (const auto& [key, value] : overrides) {
    set_override(root, key, value);
  }

  const Section top(root, "");
  top.allow({"name", "mode", "duration", "output_interval", "velocity_ceiling", "violation_depth", "primary",
             "secondary", "contact", "environment", "stand_in", "attachment"});
  Scenario s;
  s.name = top.text("name", s.name);
  s.mode = parse_coupling_kind(top.text("mode", to_string(s.mode)));
  s.duration = top.num("duration", s.duration);
  s.output_interval = top.num("output_interval", s.output_interval);
  s.velocity_ceiling = top.num("velocity_ceiling", s.velocity_ceiling);
  s.violation_depth = top.num("violation_depth", s.violation_depth);
  s.primary = read_primary(top.sub("primary"));
  s.secondary = read_secondary(top.sub("secondary"));
  s.contact = read_contact(top.sub("contact"));
  s.environment = read_environment(top.sub("environment"));
  if (top.has("stand_in")) {
    s.stand_in = read_stand_in(top.sub("stand_in"));
  }
  if (top.has("attachment")) {
    s.attachment = read_attachment(top.sub("attachment"));
  }
  validate(s);
  return s;
}

Scenario load_scenario_file(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot read scenario file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str(), overrides);
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "mode" << YAML::Value << to_string(s.mode);
  emit_num(out, "duration", s.duration);
  emit_num(out, "output_interval", s.output_interval);
  emit_num(out, "velocity_ceiling", s.velocity_ceiling);
  emit_num(out, "violation_depth", s.violation_depth);

  const PrimarySpec& p = s.primary;
  out << YAML::Key << "primary" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "shape" << YAML::Value << shape_name(p.shape);
  emit_num(out, "mass", p.mass);
  emit_num(out, "radius", p.radius);
  emit_vec(out, "half_extents", p.half_extents);
  emit_num(out, "inertia", p.inertia);
  emit_vec(out, "position", p.position);
  out << YAML::Key << "orientation" << YAML::Value << YAML::Flow << YAML::BeginSeq << format_exact(p.orientation.w)
      << format_exact(p.orientation.x) << format_exact(p.orientation.y) << format_exact(p.orientation.z)
      << YAML::EndSeq;
  emit_vec(out, "velocity", p.velocity);
  emit_vec(out, "angular_velocity", p.angular_velocity);
  emit_num(out, "dt", p.dt);
  out << YAML::EndMap;

  const SecondarySpec& q = s.secondary;
  out << YAML::Key << "secondary" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << secondary_name(q.kind);
  out << YAML::Key << "material" << YAML::Value << q.material;
  if (q.mass) emit_num(out, "mass", *q.mass);
  if (q.stiffness) emit_num(out, "stiffness", *q.stiffness);
  if (q.global_damping) emit_num(out, "global_damping", *q.global_damping);
  emit_num(out, "dt", q.dt);
  out << YAML::Key << "net" << YAML::Value << YAML::BeginMap;
  emit_num(out, "rings", q.net.rings);
  emit_num(out, "spokes", q.net.spokes);
  emit_num(out, "rim_radius", q.net.rim_radius);
  emit_num(out, "depth", q.net.depth);
  emit_num(out, "taper", q.net.taper);
  emit_num(out, "attach_gap", q.net.attach_gap);
  emit_vec(out, "rim_center", q.net.rim_center);
  out << YAML::EndMap;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  emit_num(out, "rows", q.grid.rows);
  emit_num(out, "cols", q.grid.cols);
  emit_num(out, "width", q.grid.width);
  emit_num(out, "height", q.grid.height);
  emit_vec(out, "origin", q.grid.origin);
  emit_vec(out, "width_axis", q.grid.width_axis);
  emit_vec(out, "height_axis", q.grid.height_axis);
  out << YAML::Key << "pinned_edge" << YAML::Value << edge_name(q.grid.pinned_edge);
  out << YAML::EndMap;
  out << YAML::Key << "cord" << YAML::Value << YAML::BeginMap;
  emit_num(out, "segments", q.cord.segments);
  emit_num(out, "length", q.cord.length);
  emit_vec(out, "anchor", q.cord.anchor);
  emit_vec(out, "direction", q.cord.direction);
  emit_num(out, "initial_extent", q.cord.initial_extent);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "contact" << YAML::Value << YAML::BeginMap;
  emit_num(out, "k_constraint", s.contact.k_constraint);
  emit_num(out, "c_damp", s.contact.c_damp);
  emit_num(out, "k_restore", s.contact.k_restore);
  emit_num(out, "mu", s.contact.mu);
  out << YAML::EndMap;

  const EnvironmentSpec& e = s.environment;
  out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "gravity", e.gravity.g);
  if (e.ground_height) emit_num(out, "ground_height", *e.ground_height);
  out << YAML::Key << "wind" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "uniform", e.wind.uniform);
  if (e.wind.source) {
    out << YAML::Key << "source" << YAML::Value << YAML::BeginMap;
    emit_num(out, "strength", e.wind.strength);
    emit_num(out, "falloff_radius", e.wind.falloff_radius);
    emit_num(out, "core_radius", e.wind.core_radius);
    emit_vec(out, "position", e.wind.source_position);
    out << YAML::Key << "follow_primary" << YAML::Value << (e.wind.follow_primary ? "true" : "false");
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  if (e.aero) {
    out << YAML::Key << "aero" << YAML::Value << YAML::BeginMap;
    emit_num(out, "c_normal", e.aero->c_normal);
    out << YAML::Key << "quadratic" << YAML::Value << (e.aero->quadratic ? "true" : "false");
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  if (s.stand_in) {
    out << YAML::Key << "stand_in" << YAML::Value << YAML::BeginMap;
    std::visit(
        [&](const auto& alt) {
          using T = std::decay_t<decltype(alt)>;
          if constexpr (std::is_same_v<T, DampingFieldStandIn>) {
            out << YAML::Key << "kind" << YAML::Value << "damping_field";
            emit_num(out, "c_linear", alt.c_linear);
            emit_num(out, "c_angular", alt.c_angular);
            if (s.stand_in->auto_region) {
              out << YAML::Key << "region" << YAML::Value << "auto";
            } else if (const auto* box = std::get_if<BoxRegion>(&alt.region)) {
              out << YAML::Key << "region" << YAML::Value << YAML::BeginMap << YAML::Key << "box" << YAML::Value
                  << YAML::BeginMap;
              emit_vec(out, "min", box->min);
              emit_vec(out, "max", box->max);
              out << YAML::EndMap << YAML::EndMap;
            } else {
              const auto& c = std::get<CylinderRegion>(alt.region);
              out << YAML::Key << "region" << YAML::Value << YAML::BeginMap << YAML::Key << "cylinder"
                  << YAML::Value << YAML::BeginMap;
              emit_num(out, "center_x", c.center_x);
              emit_num(out, "center_z", c.center_z);
              emit_num(out, "radius", c.radius);
              emit_num(out, "y_min", c.y_min);
              emit_num(out, "y_max", c.y_max);
              out << YAML::EndMap << YAML::EndMap;
            }
          } else if constexpr (std::is_same_v<T, SpringGridStandIn>) {
            out << YAML::Key << "kind" << YAML::Value << "spring_grid";
            emit_num(out, "plane_height", alt.plane_height);
            emit_num(out, "k_vertical", alt.k_vertical);
            emit_num(out, "c_vertical", alt.c_vertical);
            emit_points(out, alt.contact_points);
          } else {
            out << YAML::Key << "kind" << YAML::Value << "viscous_drag";
            emit_num(out, "surface_height", alt.surface_height);
            emit_num(out, "c_drag", alt.c_drag);
            emit_points(out, alt.contact_points);
          }
        },
        s.stand_in->stand_in);
    out << YAML::EndMap;
  }

  if (s.attachment) {
    out << YAML::Key << "attachment" << YAML::Value << YAML::BeginMap;
    if (s.attachment->particle < 0) {
      out << YAML::Key << "particle" << YAML::Value << "handle";
    } else {
      emit_num(out, "particle", static_cast<double>(s.attachment->particle));
    }
    emit_vec(out, "body_point", s.attachment->body_point);
    emit_num(out, "stiffness", s.attachment->stiffness);
    emit_num(out, "damping", s.attachment->damping);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void validate(const Scenario& s) {
  require(s.duration > 0.0, "duration", "must be positive");
  require(s.output_interval > 0.0, "output_interval", "must be positive");
  require(s.velocity_ceiling > 0.0, "velocity_ceiling", "must be positive");
  require(s.violation_depth > 0.0, "violation_depth", "must be positive");

  const PrimarySpec& p = s.primary;
  if (p.shape != PrimaryShape::None) {
    require(p.mass > 0.0, "primary.mass", "must be positive");
    require(p.dt > 0.0, "primary.dt", "must be positive");
    require(p.inertia >= 0.0, "primary.inertia", "must be non-negative");
    require(std::abs(p.orientation.norm() - 1.0) <= 1e-9, "primary.orientation", "must be a unit quaternion");
    if (p.shape == PrimaryShape::Sphere) {
      require(p.radius > 0.0, "primary.radius", "must be positive");
    } else {
      require(p.half_extents.x > 0.0 && p.half_extents.y > 0.0 && p.half_extents.z > 0.0, "primary.half_extents",
              "must be positive");
    }
  }

  const SecondarySpec& q = s.secondary;
  if (q.kind != SecondaryKind::None) {
    require(q.dt > 0.0, "secondary.dt", "must be positive");
    const auto names = material_preset_names();
    require(std::find(names.begin(), names.end(), q.material) != names.end(), "secondary.material",
            "unknown preset '" + q.material + "'");
    if (q.mass) require(*q.mass > 0.0, "secondary.mass", "must be positive");
    if (q.stiffness) require(*q.stiffness >= 0.0, "secondary.stiffness", "must be non-negative");
    if (q.global_damping) require(*q.global_damping >= 0.0, "secondary.global_damping", "must be non-negative");
    if (q.kind == SecondaryKind::Net) {
      require(q.net.rings >= 2, "secondary.net.rings", "must be at least 2");
      require(q.net.spokes >= 3, "secondary.net.spokes", "must be at least 3");
      require(q.net.rim_radius > 0.0, "secondary.net.rim_radius", "must be positive");
      require(q.net.depth > 0.0, "secondary.net.depth", "must be positive");
      require(q.net.attach_gap > 0.0, "secondary.net.attach_gap", "must be positive");
      require(q.net.taper >= 0.0 && q.net.taper < 1.0, "secondary.net.taper", "must lie in [0, 1)");
    } else if (q.kind == SecondaryKind::Grid) {
      require(q.grid.rows >= 2, "secondary.grid.rows", "must be at least 2");
      require(q.grid.cols >= 2, "secondary.grid.cols", "must be at least 2");
      require(q.grid.width > 0.0, "secondary.grid.width", "must be positive");
      require(q.grid.height > 0.0, "secondary.grid.height", "must be positive");
      require(q.grid.width_axis.norm() > 0.0, "secondary.grid.width_axis", "must be non-zero");
      require(q.grid.height_axis.norm() > 0.0, "secondary.grid.height_axis", "must be non-zero");
    } else {
      require(q.cord.segments >= 1, "secondary.cord.segments", "must be at least 1");
      require(q.cord.length > 0.0, "secondary.cord.length", "must be positive");
      require(q.cord.direction.norm() > 0.0, "secondary.cord.direction", "must be non-zero");
    }
  }

  require(s.contact.k_constraint >= 0.0, "contact.k_constraint", "must be non-negative");
  require(s.contact.c_damp >= 0.0, "contact.c_damp", "must be non-negative");
  require(s.contact.k_restore >= 0.0, "contact.k_restore", "must be non-negative");
  require(s.contact.mu >= 0.0, "contact.mu", "must be non-negative");

  const EnvironmentSpec& e = s.environment;
  if (e.wind.source) {
    require(e.wind.falloff_radius > 0.0, "environment.wind.source.falloff_radius", "must be positive");
    require(e.wind.core_radius > 0.0, "environment.wind.source.core_radius", "must be positive");
  }
  if (e.aero) {
    require(e.aero->c_normal >= 0.0, "environment.aero.c_normal", "must be non-negative");
  }

  if (s.mode == CouplingKind::Hybrid) {
    require(s.stand_in.has_value(), "stand_in", "required for mode hybrid");
    require(p.shape != PrimaryShape::None, "primary.shape", "hybrid coupling needs a primary");
  }
  if (s.stand_in) {
    try {
      validate(s.stand_in->stand_in);
    } catch (const ValidationError& err) {
      throw ValidationError(std::string("stand_in: ") + err.what());
    }
    if (s.stand_in->auto_region) {
      require(q.kind != SecondaryKind::None, "stand_in.region", "auto region needs a secondary system");
    }
  }
  if (s.attachment) {
    require(p.shape != PrimaryShape::None && q.kind != SecondaryKind::None, "attachment",
            "needs both a primary and a secondary");
    require(s.attachment->stiffness >= 0.0, "attachment.stiffness", "must be non-negative");
    require(s.attachment->damping >= 0.0, "attachment.damping", "must be non-negative");
  }

  // Step counts must come out whole.
  try {
    if (p.shape != PrimaryShape::None) steps_for_duration(s.duration, p.dt);
    if (q.kind != SecondaryKind::None) steps_for_duration(s.duration, q.dt);
  } catch (const ValidationError& err) {
    throw ValidationError(std::string("duration: ") + err.what());
  }
}

RigidBody build_primary(const Scenario& s) {
  const PrimarySpec& p = s.primary;
  if (p.shape == PrimaryShape::None) {
    throw ValidationError("primary.shape: scenario has no primary");
  }
  RigidBody body = p.shape == PrimaryShape::Sphere ? make_sphere(p.mass, p.radius, p.inertia)
                                                   : make_box(p.mass, p.half_extents);
  body.position = p.position;
  body.orientation = p.orientation;
  body.linear_velocity = p.velocity;
  body.angular_velocity = p.angular_velocity;
  return body;
}

MassSpringSystem build_secondary(const Scenario& s) {
  const SecondarySpec& q = s.secondary;
  if (q.kind == SecondaryKind::None) {
    throw ValidationError("secondary.kind: scenario has no secondary");
  }
  Material m = material_preset(q.material);
  if (q.mass) m.total_mass = *q.mass;
  if (q.stiffness) m.stiffness = *q.stiffness;
  if (q.global_damping) m.global_damping = *q.global_damping;
  switch (q.kind) {
    case SecondaryKind::Net: return build_net(q.net, m);
    case SecondaryKind::Grid: return build_grid(q.grid, m);
    case SecondaryKind::Cord: return build_cord(q.cord, m);
    case SecondaryKind::None: break;
  }
  throw ValidationError("secondary.kind: unsupported");
}

CoupledProblem build_problem(const Scenario& s) {
  validate(s);
  CoupledProblem pb;
  if (s.primary.shape != PrimaryShape::None) {
    pb.primary = build_primary(s);
    pb.dt_primary = s.primary.dt;
  }
  if (s.secondary.kind != SecondaryKind::None) {
    pb.secondary = build_secondary(s);
    pb.dt_secondary = s.secondary.dt;
  }
  pb.contact = s.contact;
  pb.gravity = s.environment.gravity;
  pb.wind.uniform = s.environment.wind.uniform;
  if (s.environment.wind.source) {
    WindSource src;
    src.strength = s.environment.wind.strength;
    src.falloff_radius = s.environment.wind.falloff_radius;
    src.core_radius = s.environment.wind.core_radius;
    src.position = s.environment.wind.source_position;
    pb.wind.source = src;
    pb.wind_follows_primary = s.environment.wind.follow_primary;
  }
  pb.aero = s.environment.aero;
  pb.ground_height = s.environment.ground_height;
  if (s.attachment) {
    AttachmentLink link;
    link.particle = s.attachment->particle < 0 ? pb.secondary->size() - 1
                                               : static_cast<std::size_t>(s.attachment->particle);
    if (link.particle >= pb.secondary->size()) {
      throw ValidationError("attachment.particle: index out of range");
    }
    link.body_point = s.attachment->body_point;
    link.stiffness = s.attachment->stiffness;
    link.damping = s.attachment->damping;
    pb.attachment = link;
  }
  pb.duration = s.duration;
  pb.output_interval = s.output_interval;
  pb.velocity_ceiling = s.velocity_ceiling;
  pb.violation_depth = s.violation_depth;
  return pb;
}

CouplingMode build_mode(const Scenario& s, CouplingKind kind) {
  CouplingMode mode;
  mode.kind = kind;
  if (kind == CouplingKind::Hybrid) {
    if (!s.stand_in) {
      throw ValidationError("stand_in: required for mode hybrid");
    }
    StandIn stand_in = s.stand_in->stand_in;
    if (s.stand_in->auto_region) {
      if (auto* field = std::get_if<DampingFieldStandIn>(&stand_in)) {
        field->region = bounding_cylinder(build_secondary(s));
      }
    }
    // A box landing on springs touches with its bottom face, not its center.
    auto* grid = std::get_if<SpringGridStandIn>(&stand_in);
    if (grid != nullptr && grid->contact_points.empty() && s.primary.shape == PrimaryShape::Box) {
      for (const Vec3& c : box_corners(s.primary.half_extents)) {
        if (c.y < 0.0) {
          grid->contact_points.push_back(c);
        }
      }
    }
    mode.stand_in = stand_in;
  }
  validate(mode);
  return mode;
}

RunArtifacts run_scenario(const Scenario& s, std::optional<CouplingKind> kind) {
  const CoupledProblem problem = build_problem(s);
  RunArtifacts a;
  a.mode = kind.value_or(s.mode);
  a.result = run_coupled(problem, build_mode(s, a.mode));
  a.primary_mass = problem.primary ? problem.primary->mass : 0.0;
  a.secondary_mass = problem.secondary ? problem.secondary->free_mass() : 0.0;
  if (!a.result.log.empty() && a.primary_mass > 0.0) {
    a.stats = summarize_interaction(a.result.log, a.primary_mass);
  }
  return a;
}

}  // namespace simcouple
