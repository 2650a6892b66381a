#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hrcn/common.hpp"
#include "hrcn/rng.hpp"

namespace hrcn {

enum class RadarKind { MimoColocated, PhasedArray, MechScan };

const char* to_string(RadarKind kind);

/// Per-target measurement timing: visits at initial_time + m * revisit_interval.
struct RevisitSchedule {
  double initial_time = 0.0;
  double revisit_interval = 1.0;
};

struct RadarSpec {
  int id = 0;
  RadarKind kind = RadarKind::MechScan;
  Vector2 position = Vector2::Zero();

  /// Occupied subchannels: a contiguous run [band_start, band_start + band_count).
  int band_start = 0;
  int band_count = 1;

  double signal_bandwidth = 1.0;  // transmit bandwidth, enters range/velocity error scaling
  double beamwidth_3db = 1.0;     // radians, enters angle error scaling
  double rx_noise_power = 1.0;

  /// Dwell per measurement for kinds that do not allocate time (MIMO, mech-scan).
  double fixed_dwell = 1.0;
  /// Transmit power for kinds that do not allocate power (phased-array, mech-scan).
  double fixed_power = 1.0;

  std::optional<double> power_budget;  // MIMO only
  std::optional<double> time_budget;   // phased-array only

  std::vector<RevisitSchedule> schedule;  // one entry per target

  /// Binary selection vector over the full subchannel grid.
  Eigen::VectorXd band_selector(int num_subchannels) const;
};

struct TargetSpec {
  int id = 0;
  TargetState initial_state = TargetState::Zero();
  Eigen::VectorXd rcs;  // per-radar reflectivity coefficient, > 0
  double process_noise_intensity = 0.0;  // squared acceleration density per axis
};

enum class CommTier { Macro, Micro };

const char* to_string(CommTier tier);

struct CommUserSpec {
  int id = 0;
  CommTier tier = CommTier::Macro;
  double channel_gain = 1.0;
  double noise_power = 1.0;
  /// Required downlink throughput in nats. When absent, solvers calibrate it
  /// per fusion interval so the uniform allocation is exactly feasible.
  std::optional<double> throughput_threshold;
  double cross_tier_gain = 0.0;           // micro only: gain from the paired macro downlink
  Eigen::VectorXd radar_to_user_gains;    // length N
  Eigen::VectorXd user_to_radar_gains;    // length N, macro only
};

/// Immutable description of the radar-communications world. Values are
/// dimensionless linear units unless a field says otherwise; only ratios
/// enter the error and SINR formulas.
struct Scenario {
  int schema_version = 1;

  std::vector<RadarSpec> radars;   // ordered MIMO, phased-array, mech-scan
  std::vector<TargetSpec> targets;
  std::vector<CommUserSpec> users;

  double fusion_period = 10.0;     // seconds
  double total_bandwidth = 1.0;    // Hz
  double subchannel_width = 1.0;   // Hz
  int comm_block_size = 1;         // subchannels per communications block
  double comm_power_budget = 1.0;

  double range_const = 1.0;
  double angle_const = 1.0;
  double doppler_const = 1.0;

  int num_subchannels() const;     // round(total_bandwidth / subchannel_width)
  int block_slots() const { return num_subchannels() / comm_block_size; }

  int num_mimo() const;
  int num_phased() const;
  int num_mech() const;
  int num_targets() const { return static_cast<int>(targets.size()); }
  int num_radars() const { return static_cast<int>(radars.size()); }
  int num_macro_users() const;
  std::vector<int> macro_user_indices() const;

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

std::string scenario_to_json_text(const Scenario& scenario);
Scenario scenario_from_json_text(const std::string& text);

struct GeneratorCounts {
  int mimo = 1;
  int phased = 1;
  int mech = 1;
  int targets = 1;
  int macro_users = 1;
};

/// Random world with radars/targets placed in [region_min, region_max]^2 and
/// gains/noise powers drawn as squared standard normals. Deterministic in seed.
Scenario generate_random_scenario(std::uint64_t seed, const GeneratorCounts& counts,
                                  double region_min = -6000.0, double region_max = 6000.0);

/// Measurement arrival times of one radar on one target inside [t_begin, t_begin + T0),
/// sorted ascending.
std::vector<double> measurement_schedule(const RadarSpec& radar, int target,
                                         double t_begin, double t_end);

}  // namespace hrcn
