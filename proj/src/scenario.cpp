#include "nitsche/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nitsche/errors.hpp"
#include "nitsche/mesh_io.hpp"

namespace nitsche {

using nlohmann::json;

namespace {

/// Strict accessor over one JSON object: every key must be consumed.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

  [[nodiscard]] std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    const json* v = find(key);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) fail(at(key), "expected a number");
    return v->get<double>();
  }

  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(at(key), "expected an integer");
    return v->get<int>();
  }

  int required_integer(const std::string& key) {
    if (!obj_.contains(key)) fail(at(key), "missing");
    return integer(key, 0);
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::string required_string(const std::string& key) {
    if (!obj_.contains(key)) fail(at(key), "missing");
    return string(key, "");
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::array<double, 2> read_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    Fields::fail(where, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

int read_key_int(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    const int k = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return k;
  } catch (const std::exception&) {
    Fields::fail(where, "key '" + key + "' is not an integer id");
  }
}

MaterialDef read_material(const json& v, const std::string& path) {
  Fields f(v, path);
  MaterialDef m;
  m.E = f.number("E", m.E);
  m.nu = f.number("nu", m.nu);
  f.finish();
  try {
    (void)lame_from_engineering(m.E, m.nu);
  } catch (const InputError& e) {
    Fields::fail(path, e.what());
  }
  return m;
}

SectionDef read_section(const json& v, const std::string& path) {
  Fields f(v, path);
  SectionDef s;
  s.EI = f.number("EI", 0.0);
  s.EA = f.number("EA", 0.0);
  f.finish();
  if (s.EI < 0.0) Fields::fail(path + ".EI", "must be >= 0");
  if (s.EA < 0.0) Fields::fail(path + ".EA", "must be >= 0");
  return s;
}

InterfaceLoadDef read_interface_load(const json& v, const std::string& path) {
  Fields f(v, path);
  InterfaceLoadDef l;
  l.f_n = f.number("f_n", 0.0);
  l.f_t = f.number("f_t", 0.0);
  f.finish();
  return l;
}

GeometryDef read_geometry(const json& v) {
  Fields f(v, "geometry");
  GeometryDef g;
  g.builtin = f.string("builtin", "");
  if (const json* pts = f.find("points")) {
    if (!pts->is_array()) Fields::fail("geometry.points", "expected an array");
    for (std::size_t k = 0; k < pts->size(); ++k) {
      Fields p((*pts)[k], "geometry.points[" + std::to_string(k) + "]");
      PointDef d;
      d.label = p.required_string("label");
      d.x = p.number("x", 0.0);
      d.y = p.number("y", 0.0);
      p.finish();
      g.points.push_back(d);
    }
  }
  if (const json* subs = f.find("subdomains")) {
    if (!subs->is_array()) Fields::fail("geometry.subdomains", "expected an array");
    for (std::size_t k = 0; k < subs->size(); ++k) {
      const std::string where = "geometry.subdomains[" + std::to_string(k) + "]";
      Fields s((*subs)[k], where);
      SubdomainDef d;
      d.id = s.required_integer("id");
      const json* verts = s.find("vertices");
      if (!verts || !verts->is_array()) Fields::fail(where + ".vertices", "expected an array of [x, y]");
      for (std::size_t j = 0; j < verts->size(); ++j) {
        d.vertices.push_back(read_pair((*verts)[j], where + ".vertices[" + std::to_string(j) + "]"));
      }
      s.finish();
      g.subdomains.push_back(d);
    }
  }
  if (const json* segs = f.find("segments")) {
    if (!segs->is_array()) Fields::fail("geometry.segments", "expected an array");
    for (std::size_t k = 0; k < segs->size(); ++k) {
      Fields s((*segs)[k], "geometry.segments[" + std::to_string(k) + "]");
      SegmentDef d;
      d.from = s.required_string("from");
      d.to = s.required_string("to");
      d.plus_side = s.required_integer("plus_side");
      d.minus_side = s.required_integer("minus_side");
      s.finish();
      g.segments.push_back(d);
    }
  }
  f.finish();
  if (!g.builtin.empty()) {
    if (g.builtin != "cantilever") Fields::fail("geometry.builtin", "unknown builtin geometry '" + g.builtin + "'");
    if (!g.points.empty() || !g.subdomains.empty() || !g.segments.empty()) {
      Fields::fail("geometry", "builtin geometry cannot be combined with explicit points/subdomains/segments");
    }
  } else if (g.subdomains.empty()) {
    Fields::fail("geometry", "either builtin or subdomains is required");
  }
  return g;
}

json pair_json(const std::array<double, 2>& p) { return json::array({p[0], p[1]}); }

}  // namespace

Scenario scenario_from_json(const json& doc) {
  Fields root(doc, "");
  const json* version = root.find("spec");
  if (!version) Fields::fail("spec", "missing schema version (expected \"spec\": 1)");
  if (!version->is_number_integer() || version->get<int>() != kConfigVersion) {
    Fields::fail("spec", "unsupported schema version (expected 1)");
  }
  Scenario sc;
  sc.name = root.string("name", sc.name);

  const json* geometry = root.find("geometry");
  if (!geometry) Fields::fail("geometry", "missing");
  sc.geometry = read_geometry(*geometry);

  if (const json* v = root.find("material")) sc.material = read_material(*v, "material");
  if (const json* v = root.find("subdomain_materials")) {
    if (!v->is_object()) Fields::fail("subdomain_materials", "expected an object keyed by subdomain id");
    for (auto it = v->begin(); it != v->end(); ++it) {
      const std::string where = "subdomain_materials." + it.key();
      sc.subdomain_materials[read_key_int(it.key(), where)] = read_material(it.value(), where);
    }
  }
  if (const json* v = root.find("section")) sc.section = read_section(*v, "section");
  if (const json* v = root.find("segment_sections")) {
    if (!v->is_object()) Fields::fail("segment_sections", "expected an object keyed by segment index");
    for (auto it = v->begin(); it != v->end(); ++it) {
      const std::string where = "segment_sections." + it.key();
      sc.segment_sections[read_key_int(it.key(), where)] = read_section(it.value(), where);
    }
  }

  if (const json* v = root.find("coupling")) {
    Fields f(*v, "coupling");
    auto& c = sc.coupling;
    c.mode = f.string("mode", c.mode);
    c.gamma0_factor = f.number("gamma0_factor", c.gamma0_factor);
    c.gamma0 = f.optional_number("gamma0");
    c.alpha = f.number("alpha", c.alpha);
    c.beta = f.number("beta", c.beta);
    f.finish();
    try {
      (void)parse_mode(c.mode);
    } catch (const InputError& e) {
      Fields::fail("coupling.mode", e.what());
    }
    if (!(c.gamma0_factor > 0.0)) Fields::fail("coupling.gamma0_factor", "must be > 0");
    if (c.gamma0 && !(*c.gamma0 > 0.0)) Fields::fail("coupling.gamma0", "must be > 0");
    if (c.alpha < 0.0) Fields::fail("coupling.alpha", "must be >= 0");
    if (c.beta < 0.0) Fields::fail("coupling.beta", "must be >= 0");
    if ((c.mode == "hybrid" || c.mode == "strong") && (c.alpha != 0.0 || c.beta != 0.0)) {
      Fields::fail("coupling", "alpha and beta must be 0 in " + c.mode + " mode");
    }
    if (c.mode == "contact" && !(c.alpha > 0.0)) {
      Fields::fail("coupling.alpha", "contact mode requires alpha > 0");
    }
  }

  if (const json* v = root.find("loads")) {
    Fields f(*v, "loads");
    auto& l = sc.loads;
    if (const json* b = f.find("body_force")) l.body_force = read_pair(*b, "loads.body_force");
    if (const json* b = f.find("subdomain_body_forces")) {
      if (!b->is_object()) Fields::fail("loads.subdomain_body_forces", "expected an object keyed by subdomain id");
      for (auto it = b->begin(); it != b->end(); ++it) {
        const std::string where = "loads.subdomain_body_forces." + it.key();
        l.subdomain_body_forces[read_key_int(it.key(), where)] = read_pair(it.value(), where);
      }
    }
    if (const json* b = f.find("interface")) l.interface = read_interface_load(*b, "loads.interface");
    if (const json* b = f.find("segment_loads")) {
      if (!b->is_object()) Fields::fail("loads.segment_loads", "expected an object keyed by segment index");
      for (auto it = b->begin(); it != b->end(); ++it) {
        const std::string where = "loads.segment_loads." + it.key();
        l.segment_loads[read_key_int(it.key(), where)] = read_interface_load(it.value(), where);
      }
    }
    f.finish();
  }

  if (const json* v = root.find("boundary")) {
    Fields f(*v, "boundary");
    auto& b = sc.boundary;
    if (const json* c = f.find("clamped")) {
      if (!c->is_array()) Fields::fail("boundary.clamped", "expected an array");
      for (std::size_t k = 0; k < c->size(); ++k) {
        Fields e((*c)[k], "boundary.clamped[" + std::to_string(k) + "]");
        EdgeRef r;
        r.subdomain = e.required_integer("subdomain");
        r.edge = e.required_integer("edge");
        e.finish();
        b.clamped.push_back(r);
      }
    }
    if (const json* c = f.find("interface_clamps")) {
      if (!c->is_array()) Fields::fail("boundary.interface_clamps", "expected an array of point labels");
      for (const auto& x : *c) {
        if (!x.is_string()) Fields::fail("boundary.interface_clamps", "expected point labels");
        b.interface_clamps.push_back(x.get<std::string>());
      }
    }
    b.clamp_rotation = f.string("clamp_rotation", b.clamp_rotation);
    f.finish();
    if (b.clamp_rotation != "auto" && b.clamp_rotation != "always" && b.clamp_rotation != "never") {
      Fields::fail("boundary.clamp_rotation", "expected auto, always or never");
    }
  }

  if (const json* v = root.find("mesh")) {
    Fields f(*v, "mesh");
    auto& m = sc.mesh;
    m.target_h = f.number("target_h", m.target_h);
    if (!(m.target_h > 0.0)) Fields::fail("mesh.target_h", "must be > 0");
    if (const json* s = f.find("subdomain_h")) {
      if (!s->is_object()) Fields::fail("mesh.subdomain_h", "expected an object keyed by subdomain id");
      for (auto it = s->begin(); it != s->end(); ++it) {
        const std::string where = "mesh.subdomain_h." + it.key();
        if (!it->is_number() || !(it->get<double>() > 0.0)) Fields::fail(where, "expected a positive number");
        m.subdomain_h[read_key_int(it.key(), where)] = it->get<double>();
      }
    }
    m.interface_element_size = f.optional_number("interface_element_size");
    if (m.interface_element_size && *m.interface_element_size < 0.0) {
      Fields::fail("mesh.interface_element_size", "must be >= 0");
    }
    m.cache = f.string("cache", "");
    f.finish();
  }

  if (const json* v = root.find("output")) {
    Fields f(*v, "output");
    auto& o = sc.output;
    o.directory = f.string("directory", o.directory);
    if (const json* fm = f.find("formats")) {
      if (!fm->is_array()) Fields::fail("output.formats", "expected an array");
      o.formats.clear();
      for (const auto& x : *fm) {
        if (!x.is_string()) Fields::fail("output.formats", "expected strings");
        const auto s = x.get<std::string>();
        if (s != "vtk" && s != "svg" && s != "csv") Fields::fail("output.formats", "unknown format '" + s + "'");
        o.formats.push_back(s);
      }
    }
    o.scale = f.number("scale", o.scale);
    o.probe = f.string("probe", o.probe);
    f.finish();
  }
  root.finish();
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["spec"] = kConfigVersion;
  doc["name"] = sc.name;

  json g = json::object();
  if (!sc.geometry.builtin.empty()) g["builtin"] = sc.geometry.builtin;
  if (!sc.geometry.points.empty()) {
    g["points"] = json::array();
    for (const auto& p : sc.geometry.points) g["points"].push_back({{"label", p.label}, {"x", p.x}, {"y", p.y}});
  }
  if (!sc.geometry.subdomains.empty()) {
    g["subdomains"] = json::array();
    for (const auto& s : sc.geometry.subdomains) {
      json verts = json::array();
      for (const auto& v : s.vertices) verts.push_back(pair_json(v));
      g["subdomains"].push_back({{"id", s.id}, {"vertices", verts}});
    }
  }
  if (!sc.geometry.segments.empty()) {
    g["segments"] = json::array();
    for (const auto& s : sc.geometry.segments) {
      g["segments"].push_back(
          {{"from", s.from}, {"to", s.to}, {"plus_side", s.plus_side}, {"minus_side", s.minus_side}});
    }
  }
  doc["geometry"] = g;

  doc["material"] = {{"E", sc.material.E}, {"nu", sc.material.nu}};
  if (!sc.subdomain_materials.empty()) {
    json m = json::object();
    for (const auto& [id, mat] : sc.subdomain_materials) m[std::to_string(id)] = {{"E", mat.E}, {"nu", mat.nu}};
    doc["subdomain_materials"] = m;
  }
  doc["section"] = {{"EI", sc.section.EI}, {"EA", sc.section.EA}};
  if (!sc.segment_sections.empty()) {
    json m = json::object();
    for (const auto& [id, s] : sc.segment_sections) m[std::to_string(id)] = {{"EI", s.EI}, {"EA", s.EA}};
    doc["segment_sections"] = m;
  }

  json c = {{"mode", sc.coupling.mode},
            {"gamma0_factor", sc.coupling.gamma0_factor},
            {"alpha", sc.coupling.alpha},
            {"beta", sc.coupling.beta}};
  if (sc.coupling.gamma0) c["gamma0"] = *sc.coupling.gamma0;
  doc["coupling"] = c;

  json l = {{"body_force", pair_json(sc.loads.body_force)},
            {"interface", {{"f_n", sc.loads.interface.f_n}, {"f_t", sc.loads.interface.f_t}}}};
  if (!sc.loads.subdomain_body_forces.empty()) {
    json m = json::object();
    for (const auto& [id, f] : sc.loads.subdomain_body_forces) m[std::to_string(id)] = pair_json(f);
    l["subdomain_body_forces"] = m;
  }
  if (!sc.loads.segment_loads.empty()) {
    json m = json::object();
    for (const auto& [id, f] : sc.loads.segment_loads) m[std::to_string(id)] = {{"f_n", f.f_n}, {"f_t", f.f_t}};
    l["segment_loads"] = m;
  }
  doc["loads"] = l;

  json clamped = json::array();
  for (const auto& e : sc.boundary.clamped) clamped.push_back({{"subdomain", e.subdomain}, {"edge", e.edge}});
  doc["boundary"] = {{"clamped", clamped},
                     {"interface_clamps", sc.boundary.interface_clamps},
                     {"clamp_rotation", sc.boundary.clamp_rotation}};

  json m = {{"target_h", sc.mesh.target_h}};
  if (!sc.mesh.subdomain_h.empty()) {
    json s = json::object();
    for (const auto& [id, h] : sc.mesh.subdomain_h) s[std::to_string(id)] = h;
    m["subdomain_h"] = s;
  }
  if (sc.mesh.interface_element_size) m["interface_element_size"] = *sc.mesh.interface_element_size;
  if (!sc.mesh.cache.empty()) m["cache"] = sc.mesh.cache;
  doc["mesh"] = m;

  doc["output"] = {{"directory", sc.output.directory},
                   {"formats", sc.output.formats},
                   {"scale", sc.output.scale},
                   {"probe", sc.output.probe}};
  return doc;
}

json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

std::vector<std::string> builtin_scenario_names() { return {"cantilever-bend", "cantilever-stretch"}; }

Scenario builtin_scenario(const std::string& name) {
  Scenario sc;
  sc.geometry.builtin = "cantilever";
  sc.material = {1e6, 1.0 / 3.0};
  sc.coupling.mode = "hybrid";
  sc.boundary.clamped = {{1, 3}, {2, 3}};
  sc.boundary.interface_clamps = {"A"};
  if (name == "cantilever-bend") {
    sc.name = name;
    sc.loads.body_force = {0.0, -2e4};
  } else if (name == "cantilever-stretch") {
    sc.name = name;
    sc.loads.body_force = {1e5, 0.0};
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return sc;
}

GeometryDef cantilever_geometry() {
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<double, 2> A{0.0, 0.5}, B{1.0 - r, 0.5}, C{1.0, 1.0}, D{1.0, 0.0}, E{1.0 + r, 0.5}, F{2.0, 0.5};
  GeometryDef g;
  g.points = {{"A", A[0], A[1]}, {"B", B[0], B[1]}, {"C", C[0], C[1]},
              {"D", D[0], D[1]}, {"E", E[0], E[1]}, {"F", F[0], F[1]}};
  g.subdomains = {{1, {A, B, C, {0.0, 1.0}}},
                  {2, {{0.0, 0.0}, D, B, A}},
                  {3, {B, D, E, C}},
                  {4, {C, E, F, {2.0, 1.0}}},
                  {5, {D, {2.0, 0.0}, F, E}}};
  g.segments = {{"A", "B", 1, 2}, {"B", "C", 1, 3}, {"B", "D", 3, 2},
                {"C", "E", 4, 3}, {"D", "E", 3, 5}, {"E", "F", 4, 5}};
  return g;
}

GeometryDef resolve_geometry(const GeometryDef& geometry) {
  if (geometry.builtin.empty()) return geometry;
  if (geometry.builtin == "cantilever") return cantilever_geometry();
  throw ConfigError("geometry.builtin: unknown builtin geometry '" + geometry.builtin + "'");
}

Problem build_problem(const Scenario& sc) {
  const GeometryDef geo = resolve_geometry(sc.geometry);
  Problem p;

  std::vector<SubdomainPolygon> polygons;
  std::map<int, double> h_of;
  for (const auto& s : geo.subdomains) {
    SubdomainPolygon poly{s.id, {}};
    for (const auto& v : s.vertices) poly.vertices.emplace_back(v[0], v[1]);
    polygons.push_back(poly);
    const auto it = sc.mesh.subdomain_h.find(s.id);
    h_of[s.id] = it == sc.mesh.subdomain_h.end() ? sc.mesh.target_h : it->second;
  }
  for (const auto& [id, h] : sc.mesh.subdomain_h) {
    if (!h_of.count(id)) throw ConfigError("mesh.subdomain_h: unknown subdomain " + std::to_string(id));
  }

  bool cached = false;
  if (!sc.mesh.cache.empty() && std::filesystem::exists(sc.mesh.cache)) {
    auto meshes = read_meshes(std::filesystem::path(sc.mesh.cache));
    if (meshes.size() != polygons.size()) throw ConfigError("mesh.cache: subdomain count does not match geometry");
    for (auto& m : meshes) {
      const auto it = std::find_if(polygons.begin(), polygons.end(),
                                   [&](const SubdomainPolygon& q) { return q.subdomain_id == m.subdomain_id; });
      if (it == polygons.end()) throw ConfigError("mesh.cache: unknown subdomain " + std::to_string(m.subdomain_id));
      retag_boundary(m, it->vertices);
    }
    p.meshes = std::move(meshes);
    cached = true;
  } else {
    for (const auto& poly : polygons) {
      p.meshes.push_back(triangulate_subdomain(poly.vertices, h_of[poly.subdomain_id], poly.subdomain_id));
    }
  }
  if (!sc.mesh.cache.empty() && !cached) write_meshes(std::filesystem::path(sc.mesh.cache), p.meshes);

  for (const auto& m : p.meshes) {
    const auto it = sc.subdomain_materials.find(m.subdomain_id);
    const MaterialDef md = it == sc.subdomain_materials.end() ? sc.material : it->second;
    p.materials.push_back(Material::from_engineering(md.E, md.nu));
    const auto bf = sc.loads.subdomain_body_forces.find(m.subdomain_id);
    const auto f = bf == sc.loads.subdomain_body_forces.end() ? sc.loads.body_force : bf->second;
    p.body_forces.emplace_back(f[0], f[1]);
  }
  for (const auto& [id, _] : sc.subdomain_materials) {
    if (p.mesh_index(id) < 0) throw ConfigError("subdomain_materials: unknown subdomain " + std::to_string(id));
  }
  for (const auto& [id, _] : sc.loads.subdomain_body_forces) {
    if (p.mesh_index(id) < 0) throw ConfigError("loads.subdomain_body_forces: unknown subdomain " + std::to_string(id));
  }

  std::vector<LabeledPoint> points;
  for (const auto& q : geo.points) points.push_back({q.label, Vec2(q.x, q.y)});
  std::vector<SegmentSpec> specs;
  for (std::size_t k = 0; k < geo.segments.size(); ++k) {
    const auto& s = geo.segments[k];
    if (!h_of.count(s.plus_side) || !h_of.count(s.minus_side)) {
      throw ConfigError("geometry.segments[" + std::to_string(k) + "]: side refers to an unknown subdomain");
    }
    SegmentSpec spec{s.from, s.to, s.plus_side, s.minus_side, 0.0};
    spec.element_size = sc.mesh.interface_element_size ? *sc.mesh.interface_element_size
                                                       : 0.5 * (h_of[s.plus_side] + h_of[s.minus_side]);
    specs.push_back(spec);
  }
  p.interface = build_interface(points, specs, polygons);
  const std::size_t ns = p.interface.segments.size();

  for (const auto& [k, _] : sc.segment_sections) {
    if (k < 0 || static_cast<std::size_t>(k) >= ns) {
      throw ConfigError("segment_sections: segment index " + std::to_string(k) + " out of range");
    }
  }
  for (const auto& [k, _] : sc.loads.segment_loads) {
    if (k < 0 || static_cast<std::size_t>(k) >= ns) {
      throw ConfigError("loads.segment_loads: segment index " + std::to_string(k) + " out of range");
    }
  }
  for (std::size_t k = 0; k < ns; ++k) {
    const int key = static_cast<int>(k);
    const auto it = sc.segment_sections.find(key);
    const SectionDef s = it == sc.segment_sections.end() ? sc.section : it->second;
    p.sections.push_back({s.EI, s.EA});
    const auto lt = sc.loads.segment_loads.find(key);
    const InterfaceLoadDef l = lt == sc.loads.segment_loads.end() ? sc.loads.interface : lt->second;
    InterfaceLoad load;
    if (l.f_n != 0.0) load.f_n = [v = l.f_n](double) { return v; };
    if (l.f_t != 0.0) load.f_t = [v = l.f_t](double) { return v; };
    p.interface_loads.push_back(load);
  }

  p.coupling.mode = parse_mode(sc.coupling.mode);
  p.coupling.gamma0_factor = sc.coupling.gamma0_factor;
  p.coupling.gamma0 = sc.coupling.gamma0;
  p.coupling.alpha = sc.coupling.alpha;
  p.coupling.beta = sc.coupling.beta;

  prepare_cuts(p);

  const DofMap dofs = make_dof_map(p);
  for (const auto& e : sc.boundary.clamped) {
    const int mi = p.mesh_index(e.subdomain);
    if (mi < 0) throw ConfigError("boundary.clamped: unknown subdomain " + std::to_string(e.subdomain));
    const auto& poly = *std::find_if(geo.subdomains.begin(), geo.subdomains.end(),
                                     [&](const SubdomainDef& d) { return d.id == e.subdomain; });
    if (e.edge < 0 || static_cast<std::size_t>(e.edge) >= poly.vertices.size()) {
      throw ConfigError("boundary.clamped: subdomain " + std::to_string(e.subdomain) + " has no edge " +
                        std::to_string(e.edge));
    }
    const auto c = clamp_boundary(p, dofs, mi, e.edge);
    p.constraints.insert(p.constraints.end(), c.begin(), c.end());
  }
  for (const auto& label : sc.boundary.interface_clamps) {
    const int node = p.interface.find_node(label);
    if (node < 0) throw ConfigError("boundary.interface_clamps: unknown point '" + label + "'");
    bool rotation = sc.boundary.clamp_rotation == "always";
    if (sc.boundary.clamp_rotation == "auto" && p.coupling.mode != CouplingMode::Hybrid) {
      for (int s : p.interface.nodes[static_cast<std::size_t>(node)].incident_segments) {
        rotation = rotation || p.sections[static_cast<std::size_t>(s)].EI > 0.0;
      }
    }
    const auto c = clamp_interface_node(dofs, node, rotation);
    p.constraints.insert(p.constraints.end(), c.begin(), c.end());
  }
  return p;
}

}  // namespace nitsche
