#include "so3seek/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <yaml-cpp/yaml.h>

namespace so3seek {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_plain(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Key-path aware accessors over a YAML map.
class Node {
 public:
  Node(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  void require_map(std::initializer_list<std::string_view> allowed) const {
    if (!node_.IsMap()) fail("expected a mapping");
    std::set<std::string_view> ok(allowed);
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", path_or_root(), key));
    }
  }

  bool has(const char* key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }
  Node child(const char* key) const { return {node_[key], join(key)}; }

  double real(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) return required(key, fallback);
    return scalar_real(node_[key], join(key));
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("{}: missing required key", join(key)));
    }
    const double v = real(key);
    if (v != std::floor(v) || std::abs(v) > 2e9) {
      throw ConfigError(fmt::format("{}: expected an integer", join(key)));
    }
    return static_cast<int>(v);
  }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    try {
      return node_[key].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("{}: expected a non-negative integer", join(key)));
    }
  }

  std::string text(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("{}: missing required key", join(key)));
    }
    if (!node_[key].IsScalar()) throw ConfigError(fmt::format("{}: expected a string", join(key)));
    return node_[key].as<std::string>();
  }

  Vector3 vec3(const char* key, std::optional<Vector3> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("{}: missing required key", join(key)));
    }
    return vec3_of(node_[key], join(key));
  }

  static Vector3 vec3_of(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence() || n.size() != 3) throw ConfigError(fmt::format("{}: expected [x, y, z]", path));
    Vector3 v;
    for (int i = 0; i < 3; ++i) v[i] = scalar_real(n[i], fmt::format("{}[{}]", path, i));
    return v;
  }

  const YAML::Node& raw() const { return node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(fmt::format("{}: {}", path_or_root(), msg));
  }

 private:
  static double scalar_real(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(fmt::format("{}: expected a number", path));
    try {
      return parse_real(n.as<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
  }
  double required(const char* key, std::optional<double> fallback) const {
    if (fallback) return *fallback;
    throw ConfigError(fmt::format("{}: missing required key", join(key)));
  }
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
};

Rotation parse_rotation(const Node& n) {
  n.require_map({"rotation_vector", "matrix"});
  if (n.has("rotation_vector") && n.has("matrix")) n.fail("give either rotation_vector or matrix");
  if (n.has("rotation_vector")) return exp(n.vec3("rotation_vector"));
  if (!n.has("matrix")) return Rotation::identity();
  const YAML::Node m = n.raw()["matrix"];
  if (!m.IsSequence() || m.size() != 9) n.fail("matrix must list 9 values, row-major");
  std::array<double, 9> v{};
  for (std::size_t i = 0; i < 9; ++i) v[i] = parse_real(m[i].as<std::string>());
  try {
    return Rotation::from_row_major(v);
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }
}

GaussianMode parse_mode(const Node& n) {
  n.require_map({"amplitude", "center", "widths", "axes"});
  GaussianMode m;
  m.amplitude = n.real("amplitude");
  m.center = n.vec3("center");
  m.widths = n.vec3("widths");
  m.axes = n.vec3("axes", Vector3::Zero());
  return m;
}

FieldSpec parse_field(const Node& n) {
  n.require_map({"kind", "source", "amplitude", "widths", "axes", "curvature", "domain_radius", "modes"});
  FieldSpec f;
  f.kind = field_kind_from_string(n.text("kind"));
  f.source = n.vec3("source");
  f.amplitude = n.real("amplitude", 1.0);
  f.widths = n.vec3("widths", Vector3::Ones());
  f.axes = n.vec3("axes", Vector3::Zero());
  f.curvature = n.vec3("curvature", Vector3::Ones());
  f.domain_radius = n.real("domain_radius", 1.0);
  if (n.has("modes")) {
    const YAML::Node modes = n.raw()["modes"];
    if (!modes.IsSequence()) n.fail("modes must be a list");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      f.modes.push_back(parse_mode(Node(modes[i], fmt::format("{}.modes[{}]", n.path(), i))));
    }
  }
  return f;
}

void emit_vec(YAML::Emitter& out, const Vector3& v) {
  out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

void emit_mode(YAML::Emitter& out, const GaussianMode& m) {
  out << YAML::BeginMap;
  out << YAML::Key << "amplitude" << YAML::Value << m.amplitude;
  out << YAML::Key << "center" << YAML::Value; emit_vec(out, m.center);
  out << YAML::Key << "widths" << YAML::Value; emit_vec(out, m.widths);
  out << YAML::Key << "axes" << YAML::Value; emit_vec(out, m.axes);
  out << YAML::EndMap;
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  if (parse_plain(s, value)) {
    if (!std::isfinite(value)) throw ConfigError(fmt::format("non-finite number '{}'", s));
    return value;
  }
  const auto pos = s.find("pi");
  if (pos == std::string::npos) throw ConfigError(fmt::format("cannot parse number '{}'", s));

  std::string coef = trim(s.substr(0, pos));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (coef == "+" || coef.empty()) {
    c = 1.0;
  } else if (!parse_plain(coef, c)) {
    throw ConfigError(fmt::format("cannot parse coefficient in '{}'", s));
  }

  std::string rest = trim(s.substr(pos + 2));
  double d = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError(fmt::format("cannot parse '{}'", s));
    if (!parse_plain(trim(rest.substr(1)), d) || d == 0.0) {
      throw ConfigError(fmt::format("cannot parse divisor in '{}'", s));
    }
  }
  return c * std::numbers::pi / d;
}

ScenarioFile parse_scenario(std::string_view text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("scenario is not valid YAML: {}", e.what()));
  }
  const Node root(doc, "");
  root.require_map({"name", "description", "agents", "speed", "dt", "t_end", "seed", "controller",
                    "desired", "placement", "field", "integrator", "sensing"});

  ScenarioFile sc;
  sc.name = root.text("name");
  sc.description = root.text("description", std::string());
  SimConfig& c = sc.config;
  c.n_agents = root.integer("agents");
  c.speed = root.real("speed");
  c.dt = root.real("dt");
  c.t_end = root.real("t_end");
  c.seed = root.unsigned_integer("seed", 1);

  const Node ctl = root.child("controller");
  ctl.require_map({"law", "gain_mode", "k_w", "mu_star", "delta_star", "omega_max"});
  c.law = control_law_from_string(ctl.text("law", std::string("known-ff")));
  c.gain_mode = gain_mode_from_string(ctl.text("gain_mode", std::string("manual")));
  c.controller.k_w = ctl.real("k_w", 0.0);
  c.controller.delta_star = ctl.real("delta_star", 0.4);
  // mu* defaults to delta*.
  c.controller.mu_star = ctl.real("mu_star", c.controller.delta_star);
  c.omega_max = ctl.real("omega_max", 0.0);

  const Node des = root.child("desired");
  des.require_map({"mode", "rate_frame", "initial", "omega_known", "omega_unknown"});
  c.desired.mode = desired_mode_from_string(des.text("mode"));
  c.desired.frame = rate_frame_from_string(des.text("rate_frame", std::string("literal")));
  if (des.has("initial")) c.desired.initial = parse_rotation(des.child("initial"));
  c.desired.omega_known = des.vec3("omega_known", Vector3::Zero());
  c.desired.omega_unknown = des.vec3("omega_unknown", Vector3::Zero());

  const Node pl = root.child("placement");
  pl.require_map({"kind", "positions", "center", "radius", "attitude_spread"});
  c.placement.kind = placement_kind_from_string(pl.text("kind"));
  if (pl.has("positions")) {
    const YAML::Node ps = pl.raw()["positions"];
    if (!ps.IsSequence()) pl.fail("positions must be a list of [x, y, z]");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.placement.positions.push_back(Node::vec3_of(ps[i], fmt::format("placement.positions[{}]", i)));
    }
  }
  c.placement.center = pl.vec3("center", Vector3::Zero());
  c.placement.radius = pl.real("radius", 1.0);
  c.placement.attitude_spread = pl.real("attitude_spread", 1.0);

  if (root.has("field")) c.field = parse_field(root.child("field"));

  if (root.has("integrator")) {
    const Node in = root.child("integrator");
    in.require_map({"reproject_every"});
    c.reproject_every = in.integer("reproject_every", 1000);
  }
  if (root.has("sensing")) {
    const Node se = root.child("sensing");
    se.require_map({"sample_noise"});
    c.sample_noise = se.real("sample_noise", 0.0);
  }

  c.validate();
  return sc;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const ScenarioFile& sc) {
  const SimConfig& c = sc.config;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << sc.name;
  out << YAML::Key << "description" << YAML::Value << sc.description;
  out << YAML::Key << "agents" << YAML::Value << c.n_agents;
  out << YAML::Key << "speed" << YAML::Value << c.speed;
  out << YAML::Key << "dt" << YAML::Value << c.dt;
  out << YAML::Key << "t_end" << YAML::Value << c.t_end;
  out << YAML::Key << "seed" << YAML::Value << c.seed;

  out << YAML::Key << "controller" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "law" << YAML::Value << std::string(to_string(c.law));
  out << YAML::Key << "gain_mode" << YAML::Value << std::string(to_string(c.gain_mode));
  out << YAML::Key << "k_w" << YAML::Value << c.controller.k_w;
  out << YAML::Key << "mu_star" << YAML::Value << c.controller.mu_star;
  out << YAML::Key << "delta_star" << YAML::Value << c.controller.delta_star;
  out << YAML::Key << "omega_max" << YAML::Value << c.omega_max;
  out << YAML::EndMap;

  out << YAML::Key << "desired" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.desired.mode));
  out << YAML::Key << "rate_frame" << YAML::Value << std::string(to_string(c.desired.frame));
  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap << YAML::Key << "matrix" << YAML::Value
      << YAML::Flow << YAML::BeginSeq;
  for (double v : c.desired.initial.row_major()) out << v;
  out << YAML::EndSeq << YAML::EndMap;
  out << YAML::Key << "omega_known" << YAML::Value; emit_vec(out, c.desired.omega_known);
  out << YAML::Key << "omega_unknown" << YAML::Value; emit_vec(out, c.desired.omega_unknown);
  out << YAML::EndMap;

  out << YAML::Key << "placement" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.placement.kind));
  if (!c.placement.positions.empty()) {
    out << YAML::Key << "positions" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : c.placement.positions) emit_vec(out, p);
    out << YAML::EndSeq;
  }
  out << YAML::Key << "center" << YAML::Value; emit_vec(out, c.placement.center);
  out << YAML::Key << "radius" << YAML::Value << c.placement.radius;
  out << YAML::Key << "attitude_spread" << YAML::Value << c.placement.attitude_spread;
  out << YAML::EndMap;

  if (c.field) {
    const FieldSpec& f = *c.field;
    out << YAML::Key << "field" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(f.kind));
    out << YAML::Key << "source" << YAML::Value; emit_vec(out, f.source);
    out << YAML::Key << "amplitude" << YAML::Value << f.amplitude;
    out << YAML::Key << "widths" << YAML::Value; emit_vec(out, f.widths);
    out << YAML::Key << "axes" << YAML::Value; emit_vec(out, f.axes);
    out << YAML::Key << "curvature" << YAML::Value; emit_vec(out, f.curvature);
    out << YAML::Key << "domain_radius" << YAML::Value << f.domain_radius;
    if (!f.modes.empty()) {
      out << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
      for (const auto& m : f.modes) emit_mode(out, m);
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap << YAML::Key << "reproject_every"
      << YAML::Value << c.reproject_every << YAML::EndMap;
  out << YAML::Key << "sensing" << YAML::Value << YAML::BeginMap << YAML::Key << "sample_noise"
      << YAML::Value << c.sample_noise << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace so3seek
