#include "relaysel/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace relaysel {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + path + ": " + what);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Zone as_zone(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [col, row]");
  return {as_int(v[0], path + "[0]"), as_int(v[1], path + "[1]")};
}

using Handler = std::function<void(const json&, const std::string&)>;

void apply_object(const json& obj, const std::string& path,
                  const std::map<std::string, Handler>& handlers) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = handlers.find(key);
    const std::string where = path.empty() ? key : path + "." + key;
    if (it == handlers.end()) fail(where, "unknown key");
    it->second(value, where);
  }
}

Handler number(double& target) {
  return [&target](const json& v, const std::string& p) { target = as_number(v, p); };
}
Handler count(std::size_t& target) {
  return [&target](const json& v, const std::string& p) { target = as_count(v, p); };
}
Handler integer(int& target) {
  return [&target](const json& v, const std::string& p) { target = as_int(v, p); };
}

}  // namespace

const char* to_string(PolicyKind kind) noexcept {
  return kind == PolicyKind::Pomdp ? "pomdp" : "rss";
}

PolicyKind parse_policy_kind(std::string_view text) {
  if (text == "pomdp") return PolicyKind::Pomdp;
  if (text == "rss") return PolicyKind::Rss;
  throw ConfigError("unknown policy kind '" + std::string(text) + "' (expected pomdp or rss)");
}

void ScenarioConfig::validate() const {
  world.validate();
  try {
    radio.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // Constructing the clock checks the timing invariants.
  SlotClock clock(timing.delta_s, timing.epsilon_s, timing.slots_per_period);
  if (timing.exploration_cap == 0) throw ConfigError("timing.exploration_cap must be >= 1");
  if (traffic.packets == 0) throw ConfigError("traffic.packets must be >= 1");
  if (traffic.failure_trigger == 0) throw ConfigError("traffic.failure_trigger must be >= 1");
  if (traffic.max_slots < traffic.packets) {
    throw ConfigError("traffic.max_slots must be at least traffic.packets");
  }
  if (!(solver.prior >= 0.0 && solver.prior <= 1.0)) {
    throw ConfigError("solver.prior must lie in [0,1]");
  }
  if (!(solver.tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
  if (solver.max_iterations == 0) throw ConfigError("solver.max_iterations must be >= 1");
  if (runs == 0) throw ConfigError("runs must be >= 1");
}

ScenarioConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  double q = cfg.channel.q(), s = cfg.channel.s(), k = cfg.channel.k(), g = cfg.channel.g();
  double d1 = cfg.cost.reject_cost(), d2 = cfg.cost.accept_cost(), ce = cfg.cost.probe_cost();

  auto& w = cfg.world;
  auto& r = cfg.radio;
  const std::map<std::string, Handler> world_keys{
      {"region_m", number(w.region_m)},
      {"zone_m", number(w.zone_m)},
      {"source", [&](const json& v, const std::string& p) { w.source = as_zone(v, p); }},
      {"destination", [&](const json& v, const std::string& p) { w.destination = as_zone(v, p); }},
      {"static_obstacles", integer(w.static_obstacles)},
      {"dynamic_obstacles", integer(w.dynamic_obstacles)},
      {"block_probability", number(w.block_probability)},
      {"blocking_radius_m", number(w.blocking_radius_m)},
      {"range_zones", integer(w.range_zones)},
  };
  const std::map<std::string, Handler> radio_keys{
      {"carrier_hz", number(r.carrier_hz)},
      {"tx_power_dbm", number(r.tx_power_dbm)},
      {"tx_gain_db", number(r.tx_gain_db)},
      {"rx_gain_db", number(r.rx_gain_db)},
      {"path_loss_exponent", number(r.path_loss_exponent)},
      {"shadowing_sigma_db", number(r.shadowing_sigma_db)},
      {"noise_density_dbm_hz", number(r.noise_density_dbm_hz)},
      {"bandwidth_hz", number(r.bandwidth_hz)},
      {"packet_bytes", number(r.packet_bytes)},
      {"blockage_loss_db", number(r.blockage_loss_db)},
  };
  const std::map<std::string, Handler> channel_keys{
      {"q", number(q)}, {"s", number(s)}, {"k", number(k)}, {"g", number(g)}};
  const std::map<std::string, Handler> cost_keys{
      {"reject_cost", number(d1)}, {"accept_cost", number(d2)}, {"probe_cost", number(ce)}};
  const std::map<std::string, Handler> timing_keys{
      {"delta_s", number(cfg.timing.delta_s)},
      {"epsilon_s", number(cfg.timing.epsilon_s)},
      {"slots_per_period", count(cfg.timing.slots_per_period)},
      {"exploration_cap", count(cfg.timing.exploration_cap)},
  };
  const std::map<std::string, Handler> traffic_keys{
      {"packets", count(cfg.traffic.packets)},
      {"failure_trigger", count(cfg.traffic.failure_trigger)},
      {"max_slots", count(cfg.traffic.max_slots)},
  };
  const std::map<std::string, Handler> solver_keys{
      {"prior", number(cfg.solver.prior)},
      {"tolerance", number(cfg.solver.tolerance)},
      {"max_iterations", count(cfg.solver.max_iterations)},
  };
  const auto section = [](const std::map<std::string, Handler>& keys) -> Handler {
    return [&keys](const json& v, const std::string& p) { apply_object(v, p, keys); };
  };
  const std::map<std::string, Handler> top{
      {"world", section(world_keys)},
      {"radio", section(radio_keys)},
      {"channel", section(channel_keys)},
      {"cost", section(cost_keys)},
      {"timing", section(timing_keys)},
      {"traffic", section(traffic_keys)},
      {"solver", section(solver_keys)},
      {"policy",
       [&](const json& v, const std::string& p) {
         if (!v.is_string()) fail(p, "expected \"pomdp\" or \"rss\"");
         cfg.policy = parse_policy_kind(v.get<std::string>());
       }},
      {"runs", count(cfg.runs)},
      {"seed",
       [&](const json& v, const std::string& p) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
           fail(p, "expected a non-negative integer");
         }
         cfg.seed = v.get<std::uint64_t>();
       }},
  };
  apply_object(doc, "", top);

  try {
    cfg.channel = ChannelModel(q, s, k, g);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config channel: ") + e.what());
  }
  try {
    cfg.cost = CostModel(d1, d2, ce);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config cost: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const ScenarioConfig& c) {
  ordered doc;
  doc["world"] = {
      {"region_m", c.world.region_m},
      {"zone_m", c.world.zone_m},
      {"source", {c.world.source.col, c.world.source.row}},
      {"destination", {c.world.destination.col, c.world.destination.row}},
      {"static_obstacles", c.world.static_obstacles},
      {"dynamic_obstacles", c.world.dynamic_obstacles},
      {"block_probability", c.world.block_probability},
      {"blocking_radius_m", c.world.blocking_radius_m},
      {"range_zones", c.world.range_zones},
  };
  doc["radio"] = {
      {"carrier_hz", c.radio.carrier_hz},
      {"tx_power_dbm", c.radio.tx_power_dbm},
      {"tx_gain_db", c.radio.tx_gain_db},
      {"rx_gain_db", c.radio.rx_gain_db},
      {"path_loss_exponent", c.radio.path_loss_exponent},
      {"shadowing_sigma_db", c.radio.shadowing_sigma_db},
      {"noise_density_dbm_hz", c.radio.noise_density_dbm_hz},
      {"bandwidth_hz", c.radio.bandwidth_hz},
      {"packet_bytes", c.radio.packet_bytes},
      {"blockage_loss_db", c.radio.blockage_loss_db},
  };
  doc["channel"] = {{"q", c.channel.q()}, {"s", c.channel.s()}, {"k", c.channel.k()},
                    {"g", c.channel.g()}};
  doc["cost"] = {{"reject_cost", c.cost.reject_cost()},
                 {"accept_cost", c.cost.accept_cost()},
                 {"probe_cost", c.cost.probe_cost()}};
  doc["timing"] = {{"delta_s", c.timing.delta_s},
                   {"epsilon_s", c.timing.epsilon_s},
                   {"slots_per_period", c.timing.slots_per_period},
                   {"exploration_cap", c.timing.exploration_cap}};
  doc["traffic"] = {{"packets", c.traffic.packets},
                    {"failure_trigger", c.traffic.failure_trigger},
                    {"max_slots", c.traffic.max_slots}};
  doc["solver"] = {{"prior", c.solver.prior},
                   {"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations}};
  doc["policy"] = to_string(c.policy);
  doc["runs"] = c.runs;
  doc["seed"] = c.seed;
  return doc.dump(2) + "\n";
}

}  // namespace relaysel
