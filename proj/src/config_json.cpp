#include "drygame/config_json.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>

#include "drygame/errors.hpp"

namespace drygame {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown field " + where + "." + k);
}

const json& field(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing field " + where + "." + key);
  return *it;
}

double number(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

Interval interval(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + "." + key + " must be a [lo, hi] pair of numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

GameConfig config_from_json(const json& doc) {
  const std::string root = "config";
  only_keys(doc, root,
            {"horizon", "steps", "x0", "state_grid", "per_step", "control_points",
             "disturbance_points", "dynamics", "energy", "terminal", "objective"});
  GameConfig cfg;
  cfg.horizon = number(doc, root, "horizon");
  cfg.steps = integer(doc, root, "steps");
  cfg.x0 = number(doc, root, "x0");

  const json& grid = field(doc, root, "state_grid");
  only_keys(grid, "state_grid", {"x_min", "x_max", "points"});
  cfg.state_grid = {number(grid, "state_grid", "x_min"), number(grid, "state_grid", "x_max"),
                    integer(grid, "state_grid", "points")};

  const json& steps = field(doc, root, "per_step");
  if (!steps.is_array()) throw ConfigError("per_step must be an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "per_step[" + std::to_string(i) + "]";
    only_keys(steps[i], where, {"control", "disturbance"});
    cfg.per_step.push_back({interval(steps[i], where, "control"),
                            interval(steps[i], where, "disturbance")});
  }
  cfg.control_points = integer(doc, root, "control_points");
  cfg.disturbance_points = integer(doc, root, "disturbance_points");

  const json& dyn = field(doc, root, "dynamics");
  if (!dyn.is_object()) throw ConfigError("dynamics must be an object");
  const json& kind = field(dyn, "dynamics", "kind");
  if (kind == "affine") {
    only_keys(dyn, "dynamics", {"kind", "a", "b", "c"});
    cfg.dynamics = AffineDynamics{number(dyn, "dynamics", "a"), number(dyn, "dynamics", "b"),
                                  number(dyn, "dynamics", "c")};
  } else if (kind == "lewis") {
    only_keys(dyn, "dynamics", {"kind", "k_ref", "beta", "t_ref"});
    cfg.dynamics = LewisDynamics{number(dyn, "dynamics", "k_ref"),
                                 number(dyn, "dynamics", "beta"), number(dyn, "dynamics", "t_ref")};
  } else {
    throw ConfigError("dynamics.kind must be \"affine\" or \"lewis\"");
  }

  const json& en = field(doc, root, "energy");
  only_keys(en, "energy", {"c0", "c1", "t_amb"});
  cfg.energy = {number(en, "energy", "c0"), number(en, "energy", "c1"),
                number(en, "energy", "t_amb")};

  const json& term = field(doc, root, "terminal");
  only_keys(term, "terminal", {"lo", "hi"});
  cfg.terminal = {number(term, "terminal", "lo"), number(term, "terminal", "hi")};

  const json& obj = field(doc, root, "objective");
  if (obj == "energy")
    cfg.objective = Objective::kEnergy;
  else if (obj == "time")
    cfg.objective = Objective::kTime;
  else
    throw ConfigError("objective must be \"energy\" or \"time\"");
  return cfg;
}

json config_to_json(const GameConfig& cfg) {
  json doc;
  doc["horizon"] = cfg.horizon;
  doc["steps"] = cfg.steps;
  doc["x0"] = cfg.x0;
  doc["state_grid"] = {{"x_min", cfg.state_grid.x_min},
                       {"x_max", cfg.state_grid.x_max},
                       {"points", cfg.state_grid.points}};
  doc["per_step"] = json::array();
  for (const auto& r : cfg.per_step)
    doc["per_step"].push_back({{"control", {r.control.lo, r.control.hi}},
                               {"disturbance", {r.disturbance.lo, r.disturbance.hi}}});
  doc["control_points"] = cfg.control_points;
  doc["disturbance_points"] = cfg.disturbance_points;
  if (const auto* a = std::get_if<AffineDynamics>(&cfg.dynamics))
    doc["dynamics"] = {{"kind", "affine"}, {"a", a->a}, {"b", a->b}, {"c", a->c}};
  else if (const auto* l = std::get_if<LewisDynamics>(&cfg.dynamics))
    doc["dynamics"] = {{"kind", "lewis"}, {"k_ref", l->k_ref}, {"beta", l->beta}, {"t_ref", l->t_ref}};
  doc["energy"] = {{"c0", cfg.energy.c0}, {"c1", cfg.energy.c1}, {"t_amb", cfg.energy.t_amb}};
  doc["terminal"] = {{"lo", cfg.terminal.lo}, {"hi", cfg.terminal.hi}};
  doc["objective"] = to_string(cfg.objective);
  return doc;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  LoadedConfig out;
  out.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(out.bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  out.config = config_from_json(doc);
  return out;
}

std::string content_digest(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string hex = "sha256:";
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace drygame
