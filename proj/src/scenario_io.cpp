#include "rachsim/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rachsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

const std::map<std::string, TrafficKind> kTrafficNames = {
    {"uniform_burst", TrafficKind::UniformBurst},
    {"wavefront", TrafficKind::Wavefront},
    {"poisson", TrafficKind::PoissonBackground},
};

const std::map<std::string, SchemeKind> kSchemeNames = {
    {"aloha", SchemeKind::Aloha},
    {"aloha+acb", SchemeKind::AlohaPlusAcb},
    {"aloha+backoff", SchemeKind::AlohaPlusBackoff},
    {"dynalloc", SchemeKind::DynamicAllocation},
    {"separation", SchemeKind::Separation},
    {"crb", SchemeKind::CrbRa},
};

template <typename T>
T lookup(const std::map<std::string, T>& names, const std::string& s, const std::string& where) {
  auto it = names.find(s);
  if (it == names.end()) fail(where, "unknown value '" + s + "'");
  return it->second;
}

template <typename T>
std::string reverse_lookup(const std::map<std::string, T>& names, T v) {
  for (const auto& [name, value] : names) {
    if (value == v) return name;
  }
  throw std::logic_error("reverse_lookup: unmapped value");
}

TrafficModel parse_traffic(const json& j, const std::string& where) {
  check_keys(j, where,
             {"kind", "n_devices", "window_ms", "density_per_km2", "cell_radius_km",
              "wave_speed_km_s", "rate_per_s", "horizon_ms"});
  TrafficModel t;
  if (!j.contains("kind")) fail(where, "missing 'kind'");
  t.kind = lookup(kTrafficNames, j.at("kind").get<std::string>(), where + ".kind");
  get_if(j, "n_devices", t.n_devices);
  get_if(j, "window_ms", t.window_ms);
  get_if(j, "density_per_km2", t.density_per_km2);
  get_if(j, "cell_radius_km", t.cell_radius_km);
  get_if(j, "wave_speed_km_s", t.wave_speed_km_s);
  get_if(j, "rate_per_s", t.rate_per_s);
  get_if(j, "horizon_ms", t.horizon_ms);
  t.validate();
  return t;
}

SchemeConfig parse_scheme(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "acb", "backoff_base_ms", "dyn", "mtc_fraction", "crb"});
  SchemeConfig s;
  if (!j.contains("kind")) fail(where, "missing 'kind'");
  s.kind = lookup(kSchemeNames, j.at("kind").get<std::string>(), where + ".kind");
  if (j.contains("acb")) {
    const json& a = j.at("acb");
    check_keys(a, where + ".acb", {"p", "barring_ms"});
    get_if(a, "p", s.acb.p);
    get_if(a, "barring_ms", s.acb.barring_ms);
  }
  get_if(j, "backoff_base_ms", s.backoff_base_ms);
  if (j.contains("dyn")) {
    const json& d = j.at("dyn");
    check_keys(d, where + ".dyn", {"high_water", "low_water", "step_up", "step_down"});
    get_if(d, "high_water", s.dyn.high_water);
    get_if(d, "low_water", s.dyn.low_water);
    get_if(d, "step_up", s.dyn.step_up);
    get_if(d, "step_down", s.dyn.step_down);
  }
  get_if(j, "mtc_fraction", s.mtc_fraction);
  if (j.contains("crb")) {
    const json& c = j.at("crb");
    check_keys(c, where + ".crb",
               {"x", "y", "m0", "m_x", "m_y", "delta_x", "delta_y", "virtual_frame_len",
                "fixed_m", "freeze_delta"});
    get_if(c, "x", s.crb.x);
    get_if(c, "y", s.crb.y);
    get_if(c, "m0", s.crb.m0);
    get_if(c, "m_x", s.crb.m_x);
    get_if(c, "m_y", s.crb.m_y);
    get_if(c, "delta_x", s.crb.delta_x);
    get_if(c, "delta_y", s.crb.delta_y);
    get_if(c, "virtual_frame_len", s.crb.virtual_frame_len);
    if (c.contains("fixed_m") && !c.at("fixed_m").is_null()) {
      s.crb.fixed_m = c.at("fixed_m").get<int>();
    }
    get_if(c, "freeze_delta", s.crb.freeze_delta);
    s.crb.validate();
  }
  return s;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  for (int n : attempt_counts) {
    if (n < 0) throw std::invalid_argument("sweep.attempt_counts: must be >= 0");
  }
  for (int m : m_values) {
    if (m < 2) throw std::invalid_argument("sweep.m_values: m must be >= 2");
  }
  for (int s : slots_per_frame) {
    config_index_for_slots(s);  // throws on unsupported densities
  }
}

int config_index_for_slots(int slots_per_frame) {
  switch (slots_per_frame) {
    case 1: return 0;
    case 2: return 6;
    case 3: return 9;
    case 5: return 12;
    case 10: return 14;
    default:
      throw std::invalid_argument(
          "config_index_for_slots: supported densities are 1, 2, 3, 5, 10");
  }
}

std::vector<Scenario> expand(const SweepSpec& spec) {
  spec.validate();
  std::vector<SchemeKind> schemes =
      spec.schemes.empty() ? std::vector<SchemeKind>{spec.base.scheme.kind} : spec.schemes;
  std::vector<int> slots = spec.slots_per_frame.empty()
                               ? std::vector<int>{prach_slots_per_frame(spec.base.prach_config_index)}
                               : spec.slots_per_frame;
  std::vector<int> ms = spec.m_values;
  std::vector<int> counts = spec.attempt_counts;

  std::vector<Scenario> out;
  for (SchemeKind scheme : schemes) {
    const bool crb = scheme == SchemeKind::CrbRa;
    const std::vector<int> slot_axis =
        crb ? std::vector<int>{prach_slots_per_frame(spec.base.prach_config_index)} : slots;
    const std::vector<int> m_axis = (crb && !ms.empty()) ? ms : std::vector<int>{0};
    for (int s : slot_axis) {
      for (int m : m_axis) {
        const std::vector<int>& count_axis =
            counts.empty() ? std::vector<int>{spec.base.traffic.n_devices} : counts;
        for (int n : count_axis) {
          Scenario sc = spec.base;
          sc.scheme.kind = scheme;
          sc.prach_config_index = config_index_for_slots(s);
          if (m > 0) sc.scheme.crb.fixed_m = m;
          if (spec.base.traffic.kind == TrafficKind::UniformBurst) sc.traffic.n_devices = n;
          std::ostringstream name;
          name << spec.base.name << "/" << scheme_name(scheme) << "/slots" << s;
          if (m > 0) name << "/m" << m;
          name << "/n" << (spec.base.traffic.kind == TrafficKind::UniformBurst
                               ? n
                               : spec.base.traffic.n_devices);
          sc.name = name.str();
          sc.validate();
          out.push_back(std::move(sc));
        }
      }
    }
  }
  return out;
}

SweepSpec parse_scenario_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  check_keys(j, origin,
             {"name", "traffic", "scheme", "prach_config_index", "retransmission_cap", "seed",
              "horizon_ms", "n_repetitions", "pool", "htc_fraction", "reinit_spread_ms",
              "sweep", "output"});
  SweepSpec spec;
  get_if(j, "name", spec.base.name);
  if (!j.contains("traffic")) fail(origin, "missing 'traffic'");
  spec.base.traffic = parse_traffic(j.at("traffic"), origin + ".traffic");
  if (j.contains("scheme")) spec.base.scheme = parse_scheme(j.at("scheme"), origin + ".scheme");
  get_if(j, "prach_config_index", spec.base.prach_config_index);
  if (j.contains("retransmission_cap")) {
    const json& c = j.at("retransmission_cap");
    if (c.is_null()) {
      spec.base.retransmission_cap.reset();
    } else {
      spec.base.retransmission_cap = c.get<int>();
    }
  }
  get_if(j, "seed", spec.base.seed);
  get_if(j, "horizon_ms", spec.base.horizon_ms);
  get_if(j, "n_repetitions", spec.base.n_repetitions);
  if (j.contains("pool")) {
    const json& p = j.at("pool");
    check_keys(p, origin + ".pool", {"n_cf", "mtc_count"});
    get_if(p, "n_cf", spec.base.pool.n_cf);
    get_if(p, "mtc_count", spec.base.pool.mtc_count);
  }
  get_if(j, "htc_fraction", spec.base.htc_fraction);
  get_if(j, "reinit_spread_ms", spec.base.reinit_spread_ms);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, origin + ".sweep", {"attempt_counts", "m_values", "slots_per_frame", "schemes"});
    get_if(s, "attempt_counts", spec.attempt_counts);
    get_if(s, "m_values", spec.m_values);
    get_if(s, "slots_per_frame", spec.slots_per_frame);
    if (s.contains("schemes")) {
      for (const auto& name : s.at("schemes")) {
        spec.schemes.push_back(
            lookup(kSchemeNames, name.get<std::string>(), origin + ".sweep.schemes"));
      }
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, origin + ".output", {"write_traces"});
    get_if(o, "write_traces", spec.write_traces);
  }
  spec.validate();
  return spec;
}

SweepSpec parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string scenario_to_text(const SweepSpec& spec) {
  json j;
  j["name"] = spec.base.name;
  json t;
  t["kind"] = reverse_lookup(kTrafficNames, spec.base.traffic.kind);
  switch (spec.base.traffic.kind) {
    case TrafficKind::UniformBurst:
      t["n_devices"] = spec.base.traffic.n_devices;
      t["window_ms"] = spec.base.traffic.window_ms;
      break;
    case TrafficKind::Wavefront:
      t["density_per_km2"] = spec.base.traffic.density_per_km2;
      t["cell_radius_km"] = spec.base.traffic.cell_radius_km;
      t["wave_speed_km_s"] = spec.base.traffic.wave_speed_km_s;
      break;
    case TrafficKind::PoissonBackground:
      t["rate_per_s"] = spec.base.traffic.rate_per_s;
      t["horizon_ms"] = spec.base.traffic.horizon_ms;
      break;
  }
  j["traffic"] = t;
  json s;
  s["kind"] = reverse_lookup(kSchemeNames, spec.base.scheme.kind);
  if (spec.base.scheme.kind == SchemeKind::AlohaPlusAcb) {
    s["acb"] = {{"p", spec.base.scheme.acb.p}, {"barring_ms", spec.base.scheme.acb.barring_ms}};
  }
  if (spec.base.scheme.kind == SchemeKind::AlohaPlusBackoff) {
    s["backoff_base_ms"] = spec.base.scheme.backoff_base_ms;
  }
  if (spec.base.scheme.kind == SchemeKind::Separation) {
    s["mtc_fraction"] = spec.base.scheme.mtc_fraction;
  }
  const bool crb_used = spec.base.scheme.kind == SchemeKind::CrbRa ||
                        std::find(spec.schemes.begin(), spec.schemes.end(), SchemeKind::CrbRa) !=
                            spec.schemes.end();
  if (crb_used) {
    const CrbConfig& c = spec.base.scheme.crb;
    json cj = {{"x", c.x},           {"y", c.y},
               {"m0", c.m0},         {"m_x", c.m_x},
               {"m_y", c.m_y},       {"delta_x", c.delta_x},
               {"delta_y", c.delta_y}, {"virtual_frame_len", c.virtual_frame_len},
               {"freeze_delta", c.freeze_delta}};
    if (c.fixed_m) cj["fixed_m"] = *c.fixed_m;
    s["crb"] = cj;
  }
  j["scheme"] = s;
  j["prach_config_index"] = spec.base.prach_config_index;
  if (spec.base.retransmission_cap) {
    j["retransmission_cap"] = *spec.base.retransmission_cap;
  } else {
    j["retransmission_cap"] = nullptr;
  }
  j["seed"] = spec.base.seed;
  j["horizon_ms"] = spec.base.horizon_ms;
  j["n_repetitions"] = spec.base.n_repetitions;
  j["pool"] = {{"n_cf", spec.base.pool.n_cf}, {"mtc_count", spec.base.pool.mtc_count}};
  j["htc_fraction"] = spec.base.htc_fraction;
  j["reinit_spread_ms"] = spec.base.reinit_spread_ms;
  json sw;
  if (!spec.attempt_counts.empty()) sw["attempt_counts"] = spec.attempt_counts;
  if (!spec.m_values.empty()) sw["m_values"] = spec.m_values;
  if (!spec.slots_per_frame.empty()) sw["slots_per_frame"] = spec.slots_per_frame;
  if (!spec.schemes.empty()) {
    std::vector<std::string> names;
    for (SchemeKind k : spec.schemes) names.push_back(reverse_lookup(kSchemeNames, k));
    sw["schemes"] = names;
  }
  if (!sw.empty()) j["sweep"] = sw;
  j["output"] = {{"write_traces", spec.write_traces}};
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "earthquake"}; }

SweepSpec make_preset(const std::string& name) {
  SweepSpec spec;
  spec.base.name = name;
  spec.base.pool = PoolLayout{};  // 10 contention-free, 24 HTC, 30 MTC
  spec.base.prach_config_index = 6;
  spec.base.n_repetitions = 20;
  spec.base.seed = 1;
  if (name == "fig5") {
    spec.base.traffic.kind = TrafficKind::UniformBurst;
    spec.base.traffic.window_ms = 10.0;
    spec.base.retransmission_cap = 10;
    spec.base.horizon_ms = 30000.0;
    spec.base.scheme.crb.fixed_m = 4;
    spec.base.scheme.crb.freeze_delta = true;
    spec.attempt_counts = {100, 500, 1000, 1500, 2000, 2500};
    spec.schemes = {SchemeKind::Aloha, SchemeKind::CrbRa};
    spec.slots_per_frame = {2, 10};
    return spec;
  }
  if (name == "fig4") {
    spec.base.traffic.kind = TrafficKind::UniformBurst;
    spec.base.traffic.window_ms = 10.0;
    spec.base.retransmission_cap.reset();  // uncapped
    spec.base.horizon_ms = 300000.0;
    spec.base.scheme.crb.fixed_m = 4;
    spec.base.scheme.crb.freeze_delta = true;  // CRB held at 2 slots/frame
    spec.attempt_counts = {400, 800, 1600, 2400, 3200};
    spec.schemes = {SchemeKind::Aloha, SchemeKind::CrbRa};
    spec.slots_per_frame = {10};
    return spec;
  }
  if (name == "earthquake") {
    spec.base.traffic.kind = TrafficKind::Wavefront;
    spec.base.traffic.density_per_km2 = 60.0;
    spec.base.traffic.cell_radius_km = 2.0;
    spec.base.traffic.wave_speed_km_s = 10.0;
    spec.base.retransmission_cap = 10;
    spec.base.horizon_ms = 30000.0;
    return spec;
  }
  std::string known;
  for (const std::string& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace rachsim
