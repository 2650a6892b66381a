#include "hrcn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hrcn {

using nlohmann::json;

const char* to_string(RadarKind kind) {
  switch (kind) {
    case RadarKind::MimoColocated: return "mimo";
    case RadarKind::PhasedArray: return "phased_array";
    case RadarKind::MechScan: return "mech_scan";
  }
  return "?";
}

const char* to_string(CommTier tier) {
  return tier == CommTier::Macro ? "macro" : "micro";
}

Eigen::VectorXd RadarSpec::band_selector(int num_subchannels) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(num_subchannels);
  f.segment(band_start, band_count).setOnes();
  return f;
}

int Scenario::num_subchannels() const {
  return static_cast<int>(std::lround(total_bandwidth / subchannel_width));
}

int Scenario::num_mimo() const {
  return static_cast<int>(std::count_if(radars.begin(), radars.end(), [](const RadarSpec& r) {
    return r.kind == RadarKind::MimoColocated;
  }));
}

int Scenario::num_phased() const {
  return static_cast<int>(std::count_if(radars.begin(), radars.end(), [](const RadarSpec& r) {
    return r.kind == RadarKind::PhasedArray;
  }));
}

int Scenario::num_mech() const {
  return static_cast<int>(std::count_if(radars.begin(), radars.end(), [](const RadarSpec& r) {
    return r.kind == RadarKind::MechScan;
  }));
}

int Scenario::num_macro_users() const {
  return static_cast<int>(std::count_if(users.begin(), users.end(), [](const CommUserSpec& u) {
    return u.tier == CommTier::Macro;
  }));
}

std::vector<int> Scenario::macro_user_indices() const {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(users.size()); ++j) {
    if (users[j].tier == CommTier::Macro) idx.push_back(j);
  }
  return idx;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
  throw ConfigError("scenario." + field + ": " + reason);
}

}  // namespace

void Scenario::validate() const {
  if (fusion_period <= 0) fail("fusion_period", "must be positive");
  if (subchannel_width <= 0) fail("subchannel_width", "must be positive");
  if (total_bandwidth <= 0) fail("total_bandwidth", "must be positive");
  const int F = num_subchannels();
  if (F < 1) fail("num_subchannels", "bandwidth grid is empty");
  if (comm_block_size < 1) fail("comm_block_size", "must be >= 1");
  if (F % comm_block_size != 0) {
    fail("comm_block_size",
         "num_subchannels " + std::to_string(F) + " not divisible by block size " +
             std::to_string(comm_block_size));
  }
  if (comm_power_budget < 0) fail("comm_power_budget", "must be nonnegative");

  const int Q = num_targets();
  const int N = num_radars();

  // Radar ordering defines the allocation vector layout: MIMO, then
  // phased-array, then mech-scan.
  int last_rank = 0;
  auto rank = [](RadarKind k) {
    return k == RadarKind::MimoColocated ? 0 : (k == RadarKind::PhasedArray ? 1 : 2);
  };
  for (int i = 0; i < N; ++i) {
    const RadarSpec& r = radars[i];
    const std::string tag = "radars[" + std::to_string(i) + "]";
    if (rank(r.kind) < last_rank) fail(tag + ".kind", "radars must be ordered MIMO, phased-array, mech-scan");
    last_rank = rank(r.kind);
    if (r.band_count < 1) fail(tag + ".band_count", "must be >= 1");
    if (r.band_start < 0 || r.band_start + r.band_count > F) {
      fail(tag + ".band_start", "band [" + std::to_string(r.band_start) + ", " +
                                    std::to_string(r.band_start + r.band_count) +
                                    ") outside grid of " + std::to_string(F));
    }
    if (r.signal_bandwidth <= 0) fail(tag + ".signal_bandwidth", "must be positive");
    if (r.beamwidth_3db <= 0) fail(tag + ".beamwidth_3db", "must be positive");
    if (r.rx_noise_power <= 0) fail(tag + ".rx_noise_power", "must be positive");
    switch (r.kind) {
      case RadarKind::MimoColocated:
        if (!r.power_budget) fail(tag + ".power_budget", "required for MIMO radar");
        if (r.time_budget) fail(tag + ".time_budget", "not allowed for MIMO radar");
        if (*r.power_budget <= 0) fail(tag + ".power_budget", "must be positive");
        if (r.fixed_dwell <= 0) fail(tag + ".fixed_dwell", "must be positive");
        break;
      case RadarKind::PhasedArray:
        if (!r.time_budget) fail(tag + ".time_budget", "required for phased-array radar");
        if (r.power_budget) fail(tag + ".power_budget", "not allowed for phased-array radar");
        if (*r.time_budget <= 0) fail(tag + ".time_budget", "must be positive");
        if (r.fixed_power <= 0) fail(tag + ".fixed_power", "must be positive");
        break;
      case RadarKind::MechScan:
        if (r.power_budget || r.time_budget) fail(tag + ".budget", "mech-scan radar has no budget");
        if (r.fixed_power <= 0) fail(tag + ".fixed_power", "must be positive");
        if (r.fixed_dwell <= 0) fail(tag + ".fixed_dwell", "must be positive");
        break;
    }
    if (static_cast<int>(r.schedule.size()) != Q)
      fail(tag + ".schedule", "needs one entry per target");
    for (int q = 0; q < Q; ++q) {
      if (r.schedule[q].revisit_interval <= 0)
        fail(tag + ".schedule[" + std::to_string(q) + "].revisit_interval", "must be positive");
      if (r.schedule[q].initial_time < 0 || r.schedule[q].initial_time >= fusion_period)
        fail(tag + ".schedule[" + std::to_string(q) + "].initial_time",
             "must lie in [0, fusion_period)");
    }
  }

  for (int q = 0; q < Q; ++q) {
    const TargetSpec& t = targets[q];
    const std::string tag = "targets[" + std::to_string(q) + "]";
    if (!t.initial_state.allFinite()) fail(tag + ".initial_state", "must be finite");
    if (t.rcs.size() != N) fail(tag + ".rcs", "needs one entry per radar");
    if ((t.rcs.array() <= 0).any()) fail(tag + ".rcs", "all entries must be positive");
    if (t.process_noise_intensity < 0) fail(tag + ".process_noise_intensity", "must be nonnegative");
  }

  const int J = num_macro_users();
  if (J > block_slots()) {
    fail("users", "macro user count " + std::to_string(J) + " exceeds the " +
                      std::to_string(block_slots()) + " orthogonal block slots");
  }
  for (size_t j = 0; j < users.size(); ++j) {
    const CommUserSpec& u = users[j];
    const std::string tag = "users[" + std::to_string(j) + "]";
    if (u.channel_gain < 0) fail(tag + ".channel_gain", "must be nonnegative");
    if (u.noise_power <= 0) fail(tag + ".noise_power", "must be positive");
    if (u.cross_tier_gain < 0) fail(tag + ".cross_tier_gain", "must be nonnegative");
    if (u.radar_to_user_gains.size() != N) fail(tag + ".radar_to_user_gains", "needs one entry per radar");
    if ((u.radar_to_user_gains.array() < 0).any()) fail(tag + ".radar_to_user_gains", "must be nonnegative");
    if (u.tier == CommTier::Macro) {
      if (u.user_to_radar_gains.size() != N) fail(tag + ".user_to_radar_gains", "needs one entry per radar");
      if ((u.user_to_radar_gains.array() < 0).any()) fail(tag + ".user_to_radar_gains", "must be nonnegative");
      if (u.throughput_threshold && *u.throughput_threshold <= 0)
        fail(tag + ".throughput_threshold", "must be positive for macro users");
    }
  }
}

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

RadarKind kind_from_string(const std::string& s) {
  if (s == "mimo") return RadarKind::MimoColocated;
  if (s == "phased_array") return RadarKind::PhasedArray;
  if (s == "mech_scan") return RadarKind::MechScan;
  throw ConfigError("scenario.radars[].kind: unknown kind '" + s + "'");
}

json scenario_to_json(const Scenario& s) {
  json out;
  out["schema_version"] = s.schema_version;
  out["fusion_period"] = s.fusion_period;
  out["total_bandwidth"] = s.total_bandwidth;
  out["subchannel_width"] = s.subchannel_width;
  out["comm_block_size"] = s.comm_block_size;
  out["comm_power_budget"] = s.comm_power_budget;
  out["range_const"] = s.range_const;
  out["angle_const"] = s.angle_const;
  out["doppler_const"] = s.doppler_const;

  out["radars"] = json::array();
  for (const RadarSpec& r : s.radars) {
    json jr;
    jr["id"] = r.id;
    jr["kind"] = to_string(r.kind);
    jr["position"] = {r.position.x(), r.position.y()};
    jr["band_start"] = r.band_start;
    jr["band_count"] = r.band_count;
    jr["signal_bandwidth"] = r.signal_bandwidth;
    jr["beamwidth_3db"] = r.beamwidth_3db;
    jr["rx_noise_power"] = r.rx_noise_power;
    jr["fixed_dwell"] = r.fixed_dwell;
    jr["fixed_power"] = r.fixed_power;
    if (r.power_budget) jr["power_budget"] = *r.power_budget;
    if (r.time_budget) jr["time_budget"] = *r.time_budget;
    jr["schedule"] = json::array();
    for (const RevisitSchedule& v : r.schedule) {
      jr["schedule"].push_back({{"initial_time", v.initial_time},
                                {"revisit_interval", v.revisit_interval}});
    }
    out["radars"].push_back(std::move(jr));
  }

  out["targets"] = json::array();
  for (const TargetSpec& t : s.targets) {
    json jt;
    jt["id"] = t.id;
    jt["initial_state"] = {t.initial_state[0], t.initial_state[1], t.initial_state[2],
                           t.initial_state[3]};
    jt["rcs"] = vec_to_json(t.rcs);
    jt["process_noise_intensity"] = t.process_noise_intensity;
    out["targets"].push_back(std::move(jt));
  }

  out["users"] = json::array();
  for (const CommUserSpec& u : s.users) {
    json ju;
    ju["id"] = u.id;
    ju["tier"] = to_string(u.tier);
    ju["channel_gain"] = u.channel_gain;
    ju["noise_power"] = u.noise_power;
    if (u.throughput_threshold) ju["throughput_threshold"] = *u.throughput_threshold;
    if (u.tier == CommTier::Micro) ju["cross_tier_gain"] = u.cross_tier_gain;
    ju["radar_to_user_gains"] = vec_to_json(u.radar_to_user_gains);
    if (u.tier == CommTier::Macro) ju["user_to_radar_gains"] = vec_to_json(u.user_to_radar_gains);
    out["users"].push_back(std::move(ju));
  }
  return out;
}

Scenario scenario_from_json(const json& in) {
  Scenario s;
  try {
    s.schema_version = in.at("schema_version").get<int>();
    if (s.schema_version != 1) {
      throw ConfigError("scenario.schema_version: unsupported version " +
                        std::to_string(s.schema_version));
    }
    s.fusion_period = in.at("fusion_period").get<double>();
    s.total_bandwidth = in.at("total_bandwidth").get<double>();
    s.subchannel_width = in.at("subchannel_width").get<double>();
    s.comm_block_size = in.at("comm_block_size").get<int>();
    s.comm_power_budget = in.at("comm_power_budget").get<double>();
    s.range_const = in.value("range_const", 1.0);
    s.angle_const = in.value("angle_const", 1.0);
    s.doppler_const = in.value("doppler_const", 1.0);
    if (in.contains("num_subchannels") &&
        in["num_subchannels"].get<int>() != s.num_subchannels()) {
      throw ConfigError("scenario.num_subchannels: inconsistent with bandwidth / subchannel width");
    }

    for (const json& jr : in.at("radars")) {
      RadarSpec r;
      r.id = jr.at("id").get<int>();
      r.kind = kind_from_string(jr.at("kind").get<std::string>());
      r.position << jr.at("position")[0].get<double>(), jr.at("position")[1].get<double>();
      r.band_start = jr.at("band_start").get<int>();
      r.band_count = jr.at("band_count").get<int>();
      r.signal_bandwidth = jr.at("signal_bandwidth").get<double>();
      r.beamwidth_3db = jr.at("beamwidth_3db").get<double>();
      r.rx_noise_power = jr.at("rx_noise_power").get<double>();
      r.fixed_dwell = jr.value("fixed_dwell", 1.0);
      r.fixed_power = jr.value("fixed_power", 1.0);
      if (jr.contains("power_budget")) r.power_budget = jr["power_budget"].get<double>();
      if (jr.contains("time_budget")) r.time_budget = jr["time_budget"].get<double>();
      for (const json& jv : jr.at("schedule")) {
        r.schedule.push_back({jv.at("initial_time").get<double>(),
                              jv.at("revisit_interval").get<double>()});
      }
      s.radars.push_back(std::move(r));
    }

    for (const json& jt : in.at("targets")) {
      TargetSpec t;
      t.id = jt.at("id").get<int>();
      const json& st = jt.at("initial_state");
      t.initial_state << st[0].get<double>(), st[1].get<double>(), st[2].get<double>(),
          st[3].get<double>();
      t.rcs = vec_from_json(jt.at("rcs"));
      t.process_noise_intensity = jt.at("process_noise_intensity").get<double>();
      s.targets.push_back(std::move(t));
    }

    for (const json& ju : in.at("users")) {
      CommUserSpec u;
      u.id = ju.at("id").get<int>();
      u.tier = ju.at("tier").get<std::string>() == "macro" ? CommTier::Macro : CommTier::Micro;
      u.channel_gain = ju.at("channel_gain").get<double>();
      u.noise_power = ju.at("noise_power").get<double>();
      if (ju.contains("throughput_threshold") && !ju["throughput_threshold"].is_null())
        u.throughput_threshold = ju["throughput_threshold"].get<double>();
      u.cross_tier_gain = ju.value("cross_tier_gain", 0.0);
      u.radar_to_user_gains = vec_from_json(ju.at("radar_to_user_gains"));
      if (ju.contains("user_to_radar_gains"))
        u.user_to_radar_gains = vec_from_json(ju["user_to_radar_gains"]);
      s.users.push_back(std::move(u));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: malformed config: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace

std::string scenario_to_json_text(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2);
}

Scenario scenario_from_json_text(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) throw ConfigError("scenario: not valid JSON");
  return scenario_from_json(parsed);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file '" + path + "'");
  out << scenario_to_json_text(scenario) << "\n";
}

std::vector<double> measurement_schedule(const RadarSpec& radar, int target,
                                         double t_begin, double t_end) {
  const RevisitSchedule& rs = radar.schedule.at(target);
  std::vector<double> times;
  long long m = 0;
  if (t_begin > rs.initial_time) {
    m = static_cast<long long>(std::ceil((t_begin - rs.initial_time) / rs.revisit_interval));
    // ceil can land one step early on exact multiples
    while (rs.initial_time + static_cast<double>(m) * rs.revisit_interval < t_begin) ++m;
  }
  for (;; ++m) {
    double t = rs.initial_time + static_cast<double>(m) * rs.revisit_interval;
    if (t >= t_end) break;
    times.push_back(t);
  }
  return times;
}

Scenario generate_random_scenario(std::uint64_t seed, const GeneratorCounts& counts,
                                  double region_min, double region_max) {
  if (counts.mimo < 0 || counts.phased < 0 || counts.mech < 0)
    throw ConfigError("generator counts must be nonnegative");
  if (counts.targets < 1) throw ConfigError("generator needs at least one target");

  Scenario s;
  s.fusion_period = 10.0;
  s.subchannel_width = 1.0;
  s.total_bandwidth = 100.0;
  s.comm_block_size = 10;
  s.comm_power_budget = 1.0;

  const int N = counts.mimo + counts.phased + counts.mech;
  const int F = s.num_subchannels();
  if (counts.macro_users > s.block_slots()) {
    throw ConfigError("generator: macro user count " + std::to_string(counts.macro_users) +
                      " exceeds the " + std::to_string(s.block_slots()) + " block slots");
  }

  RngStream rng = RngStream(seed).fork("scenario");
  auto squared_normal = [&rng]() {
    double g = rng.normal();
    return g * g + 1e-12;  // strictly positive
  };

  const int band_count = std::max(1, F / 10);
  for (int i = 0; i < N; ++i) {
    RadarSpec r;
    r.id = i;
    r.kind = i < counts.mimo ? RadarKind::MimoColocated
             : i < counts.mimo + counts.phased ? RadarKind::PhasedArray
                                               : RadarKind::MechScan;
    r.position << rng.uniform(region_min, region_max), rng.uniform(region_min, region_max);
    r.band_start = rng.uniform_int(F - band_count + 1);
    r.band_count = band_count;
    r.signal_bandwidth = rng.uniform(0.5, 2.0);
    r.beamwidth_3db = rng.uniform(0.02, 0.05);
    r.rx_noise_power = squared_normal();
    switch (r.kind) {
      case RadarKind::MimoColocated:
        r.power_budget = 1.0;
        r.fixed_dwell = 0.1;
        break;
      case RadarKind::PhasedArray:
        r.time_budget = 1.0;
        r.fixed_power = 1.0;
        break;
      case RadarKind::MechScan:
        r.fixed_power = 0.5;
        r.fixed_dwell = 0.1;
        break;
    }
    for (int q = 0; q < counts.targets; ++q) {
      RevisitSchedule rs;
      rs.initial_time = rng.uniform(1.0, 4.0);
      rs.revisit_interval = 2.0 + 0.5 * rng.uniform_int(3);
      r.schedule.push_back(rs);
    }
    s.radars.push_back(std::move(r));
  }

  for (int q = 0; q < counts.targets; ++q) {
    TargetSpec t;
    t.id = q;
    t.initial_state << rng.uniform(region_min, region_max), rng.uniform(-60.0, 60.0),
        rng.uniform(region_min, region_max), rng.uniform(-60.0, 60.0);
    t.rcs.resize(N);
    for (int i = 0; i < N; ++i) t.rcs[i] = squared_normal();
    t.process_noise_intensity = 0.01;
    s.targets.push_back(std::move(t));
  }

  for (int j = 0; j < counts.macro_users; ++j) {
    CommUserSpec u;
    u.id = j;
    u.tier = CommTier::Macro;
    u.channel_gain = squared_normal();
    u.noise_power = squared_normal();
    u.radar_to_user_gains.resize(N);
    u.user_to_radar_gains.resize(N);
    for (int i = 0; i < N; ++i) {
      u.radar_to_user_gains[i] = squared_normal();
      u.user_to_radar_gains[i] = squared_normal();
    }
    s.users.push_back(std::move(u));
  }

  s.validate();
  return s;
}

}  // namespace hrcn
