#include "kwc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kwc/errors.hpp"

namespace kwc {

using nlohmann::json;

namespace {

json to_object(const AppConfig& c) {
  const auto& r = c.run;
  json pairs = json::array();
  for (const auto& p : c.refine.pairs) pairs.push_back({p.nu, p.h});
  json extents = json::array();
  for (int a = 0; a < r.grid.dimension; ++a) extents.push_back(r.grid.extents[static_cast<std::size_t>(a)]);
  return {
      {"grid", {{"dimension", r.grid.dimension}, {"extents", extents}, {"dx", r.grid.dx}}},
      {"model", {{"delta_alpha", r.delta_alpha}}},
      {"regularizer", {{"family", std::string(to_string(r.family))}, {"nu", r.nu}}},
      {"time", {{"h", r.h}, {"steps", r.steps}}},
      {"solver",
       {{"newton_tol", r.solver.newton_tol},
        {"max_iter", r.solver.max_iter},
        {"linear_tol", r.solver.linear_tol}}},
      {"initial",
       {{"preset", r.initial.preset},
        {"eta", r.initial.eta},
        {"theta", r.initial.theta},
        {"theta_lo", r.initial.theta_lo},
        {"theta_hi", r.initial.theta_hi},
        {"axis", r.initial.axis},
        {"blocks", r.initial.blocks},
        {"seed", r.initial.seed}}},
      {"audit",
       {{"range_tolerance", c.audit.range_tolerance},
        {"omega", c.audit.omega},
        {"sd_threshold", c.audit.omega_options.sd_threshold},
        {"wtv_threshold", c.audit.omega_options.wtv_threshold},
        {"steady_threshold", c.audit.omega_options.steady_threshold}}},
      {"output", {{"snapshot_every", c.output.snapshot_every}}},
      {"gamma", {{"cells", c.gamma.cells}, {"beta", c.gamma.beta}, {"nus", c.gamma.nus}}},
      {"refine", {{"pairs", pairs}, {"horizon", c.refine.horizon}}},
  };
}

const char* kind(const json& v) {
  if (v.is_number()) return "number";
  if (v.is_boolean()) return "boolean";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

void assign(json& slot, const json& value, const std::string& key) {
  if (std::string(kind(slot)) != kind(value)) {
    throw ConfigError("config key '" + key + "' expects a " + kind(slot) + ", got a " +
                      kind(value));
  }
  slot = value;
}

void merge(json& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) throw ConfigError("config section '" + prefix + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), key);
    } else {
      assign(slot, it.value(), key);
    }
  }
}

void apply_override(json& doc, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + text + "' is not of the form key=value");
  }
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  json* slot = &doc;
  std::stringstream path(key);
  std::string part;
  while (std::getline(path, part, '.')) {
    if (!slot->is_object() || !slot->contains(part)) {
      throw ConfigError("override references unknown key '" + key + "'");
    }
    slot = &(*slot)[part];
  }
  if (slot->is_object()) throw ConfigError("override key '" + key + "' names a section");
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  assign(*slot, value, key);
}

AppConfig from_object(const json& j) {
  AppConfig c;
  auto& r = c.run;
  const auto& g = j.at("grid");
  r.grid.dimension = g.at("dimension").get<int>();
  const auto ext = g.at("extents").get<std::vector<int>>();
  if (r.grid.dimension != 1 && r.grid.dimension != 2) {
    throw ConfigError("grid.dimension must be 1 or 2");
  }
  if (ext.size() != static_cast<std::size_t>(r.grid.dimension)) {
    throw ConfigError("grid.extents must list one cell count per dimension");
  }
  r.grid.extents = {ext[0], r.grid.dimension == 2 ? ext[1] : 1};
  r.grid.dx = g.at("dx").get<double>();
  r.delta_alpha = j.at("model").at("delta_alpha").get<double>();
  try {
    r.family = parse_family(j.at("regularizer").at("family").get<std::string>());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  r.nu = j.at("regularizer").at("nu").get<double>();
  r.h = j.at("time").at("h").get<double>();
  r.steps = j.at("time").at("steps").get<int>();
  const auto& s = j.at("solver");
  r.solver.newton_tol = s.at("newton_tol").get<double>();
  r.solver.max_iter = s.at("max_iter").get<int>();
  r.solver.linear_tol = s.at("linear_tol").get<double>();
  const auto& in = j.at("initial");
  r.initial.preset = in.at("preset").get<std::string>();
  r.initial.eta = in.at("eta").get<double>();
  r.initial.theta = in.at("theta").get<double>();
  r.initial.theta_lo = in.at("theta_lo").get<double>();
  r.initial.theta_hi = in.at("theta_hi").get<double>();
  r.initial.axis = in.at("axis").get<int>();
  r.initial.blocks = in.at("blocks").get<int>();
  r.initial.seed = in.at("seed").get<unsigned>();
  const auto& a = j.at("audit");
  c.audit.range_tolerance = a.at("range_tolerance").get<double>();
  c.audit.omega = a.at("omega").get<bool>();
  c.audit.omega_options.sd_threshold = a.at("sd_threshold").get<double>();
  c.audit.omega_options.wtv_threshold = a.at("wtv_threshold").get<double>();
  c.audit.omega_options.steady_threshold = a.at("steady_threshold").get<double>();
  c.audit.omega_options.range_tolerance = c.audit.range_tolerance;
  c.output.snapshot_every = j.at("output").at("snapshot_every").get<int>();
  if (c.output.snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");
  c.gamma.cells = j.at("gamma").at("cells").get<int>();
  c.gamma.beta = j.at("gamma").at("beta").get<double>();
  c.gamma.nus = j.at("gamma").at("nus").get<std::vector<double>>();
  c.refine.pairs.clear();
  for (const auto& p : j.at("refine").at("pairs")) {
    const auto v = p.get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError("refine.pairs entries must be [nu, h]");
    c.refine.pairs.push_back({v[0], v[1]});
  }
  c.refine.horizon = j.at("refine").at("horizon").get<double>();
  return c;
}

}  // namespace

AppConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json doc = to_object(AppConfig{});
  json user = json::parse(json_text, nullptr, false);
  if (user.is_discarded()) throw ConfigError("configuration is not valid JSON");
  merge(doc, user, "");
  for (const auto& o : overrides) apply_override(doc, o);
  try {
    return from_object(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

AppConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_json(const AppConfig& config) { return to_object(config).dump(2) + "\n"; }

std::string default_config_json() { return to_json(AppConfig{}); }

}  // namespace kwc
