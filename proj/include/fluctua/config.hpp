#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluctua/applications.hpp"
#include "fluctua/error.hpp"
#include "fluctua/model.hpp"
#include "fluctua/selfconsist.hpp"

#ifndef FLUCTUA_DEFAULT_PRESET_DIR
#define FLUCTUA_DEFAULT_PRESET_DIR "presets"
#endif

namespace fluctua::config {

using json = nlohmann::json;

/// Linear temperature grid, strictly increasing, count >= 2.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  void validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start))
      fail(ErrorKind::validation, "grid must be strictly increasing (start < stop)");
    if (count < 2) fail(ErrorKind::validation, "grid count must be at least 2");
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> out(count);
    const double step = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = start + step * i;
    out.back() = stop;
    return out;
  }
};

/// "start,stop,count".
inline GridSpec parse_grid(const std::string& text) {
  std::stringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ',') || !std::getline(in, b, ',') || !std::getline(in, c, ',') ||
      !in.eof())
    fail(ErrorKind::validation, "grid must be given as start,stop,count, got '" + text + "'");
  GridSpec g;
  try {
    std::size_t used = 0;
    g.start = std::stod(a);
    g.stop = std::stod(b);
    g.count = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    fail(ErrorKind::validation, "grid must be given as start,stop,count, got '" + text + "'");
  }
  g.validate();
  return g;
}

struct FewModeOptions {
  std::optional<double> u0;
  std::optional<double> aleph_value;  // injected aleph_d for the consistency check
  int aleph_dim = 3;
};

struct RunConfig {
  std::string name;
  std::string description;
  ModelParams params;
  PhysicalConstants constants;
  std::optional<double> calibrate_width;
  std::optional<GridSpec> grid;
  std::optional<Geometry> geometry;
  std::vector<double> l0;
  FewModeOptions oracle;
};

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::validation, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(ErrorKind::validation, "unknown key '" + key + "' in " + where);
  }
}

/// Numbers, or the strings "inf" / "infinity" for unbounded lengths.
inline double read_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return infinity;
  }
  fail(ErrorKind::validation, "field '" + key + "' must be a number or \"inf\"");
}

inline json write_number(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

template <class T>
void read_if(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = read_number(j, key);
}

}  // namespace detail

inline ModelParams params_from_json(const json& j) {
  detail::reject_unknown(j, {"a0", "Tc", "b", "u0", "xi0", "d", "L", "x_c", "kB"}, "params");
  ModelParams p;
  detail::read_if(j, "a0", p.a0);
  detail::read_if(j, "Tc", p.Tc);
  detail::read_if(j, "b", p.b);
  detail::read_if(j, "u0", p.u0);
  detail::read_if(j, "xi0", p.xi0);
  detail::read_if(j, "d", p.d);
  detail::read_if(j, "L", p.L);
  detail::read_if(j, "x_c", p.x_c);
  detail::read_if(j, "kB", p.kB);
  p.validate();
  return p;
}

inline json params_to_json(const ModelParams& p) {
  json j = json::object();
  j["a0"] = p.a0;
  j["Tc"] = p.Tc;
  j["b"] = p.b;
  j["u0"] = p.u0;
  j["xi0"] = p.xi0;
  j["d"] = p.d;
  j["L"] = detail::write_number(p.L);
  j["x_c"] = detail::write_number(p.x_c);
  j["kB"] = p.kB;
  return j;
}

inline PhysicalConstants constants_from_json(const json& j) {
  detail::reject_unknown(j, {"hbar", "mass", "charge", "mu0"}, "constants");
  PhysicalConstants c;
  detail::read_if(j, "hbar", c.hbar);
  detail::read_if(j, "mass", c.mass);
  detail::read_if(j, "charge", c.charge);
  detail::read_if(j, "mu0", c.mu0);
  c.validate();
  return c;
}

inline Geometry geometry_from_json(const json& j) {
  detail::reject_unknown(j, {"kind", "thickness", "width"}, "geometry");
  const auto kind = j.value("kind", std::string("bulk"));
  if (kind == "bulk") return Bulk3D{};
  if (kind == "film") return Film{j.contains("thickness") ? detail::read_number(j, "thickness") : 1.0};
  if (kind == "wire")
    return Wire{j.contains("thickness") ? detail::read_number(j, "thickness") : 1.0,
                j.contains("width") ? detail::read_number(j, "width") : 1.0};
  fail(ErrorKind::validation, "geometry kind must be bulk, film or wire, got '" + kind + "'");
}

/// Parses a whole run document; every level rejects unknown keys.
inline RunConfig from_json(const json& j) {
  detail::reject_unknown(j,
                         {"name", "description", "params", "constants", "calibrate_width",
                          "grid", "geometry", "l0", "oracle"},
                         "config");
  RunConfig cfg;
  try {
    cfg.name = j.value("name", std::string());
    cfg.description = j.value("description", std::string());
    if (j.contains("params")) cfg.params = params_from_json(j.at("params"));
    if (j.contains("constants")) cfg.constants = constants_from_json(j.at("constants"));
    if (j.contains("calibrate_width") && !j.at("calibrate_width").is_null())
      cfg.calibrate_width = detail::read_number(j, "calibrate_width");
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      detail::reject_unknown(g, {"start", "stop", "count"}, "grid");
      GridSpec spec{detail::read_number(g, "start"), detail::read_number(g, "stop"),
                    g.at("count").get<int>()};
      spec.validate();
      cfg.grid = spec;
    }
    if (j.contains("geometry")) cfg.geometry = geometry_from_json(j.at("geometry"));
    if (j.contains("l0")) cfg.l0 = j.at("l0").get<std::vector<double>>();
    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      detail::reject_unknown(o, {"few_mode_u0", "aleph_value", "aleph_dim"}, "oracle");
      if (o.contains("few_mode_u0")) cfg.oracle.u0 = detail::read_number(o, "few_mode_u0");
      if (o.contains("aleph_value"))
        cfg.oracle.aleph_value = detail::read_number(o, "aleph_value");
      if (o.contains("aleph_dim")) cfg.oracle.aleph_dim = o.at("aleph_dim").get<int>();
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::validation, std::string("malformed config: ") + e.what());
  }
  return cfg;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::validation, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

/// FLUCTUA_PRESET_DIR when set, else the directory compiled into the build.
inline std::filesystem::path preset_dir() {
  if (const char* env = std::getenv("FLUCTUA_PRESET_DIR"); env && *env) return env;
  return FLUCTUA_DEFAULT_PRESET_DIR;
}

struct PresetInfo {
  std::string name;
  std::string description;
};

inline std::vector<PresetInfo> list_presets() {
  const auto dir = preset_dir();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    fail(ErrorKind::io, "preset directory '" + dir.string() + "' does not exist");
  std::vector<PresetInfo> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const json j = read_json_file(entry.path());
    out.push_back({entry.path().stem().string(), j.value("description", std::string())});
  }
  std::sort(out.begin(), out.end(),
            [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  return out;
}

inline json preset_json(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos)
    fail(ErrorKind::validation, "invalid preset name '" + name + "'");
  const auto path = preset_dir() / (name + ".json");
  if (!std::filesystem::exists(path))
    fail(ErrorKind::validation, "unknown preset '" + name + "' (searched " +
                                    preset_dir().string() + ")");
  return read_json_file(path);
}

/// Preset first, then the config file merged over it; u0 is calibrated when
/// the document asks for a Ginzburg width.
inline RunConfig load(const std::optional<std::string>& preset,
                      const std::optional<std::filesystem::path>& config_path) {
  json doc = json::object();
  if (preset) doc = preset_json(*preset);
  if (config_path) doc.merge_patch(read_json_file(*config_path));
  RunConfig cfg = from_json(doc);
  if (cfg.calibrate_width) cfg.params = calibrate_to_width(*cfg.calibrate_width, cfg.params);
  return cfg;
}

}  // namespace fluctua::config
