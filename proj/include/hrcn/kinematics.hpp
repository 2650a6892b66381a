#pragma once

#include <vector>

#include "hrcn/common.hpp"
#include "hrcn/rng.hpp"

namespace hrcn {

/// Constant-velocity transition matrix I2 (x) [[1, dt], [0, 1]].
Matrix4 transition_matrix(double dt);

/// Advance a state by dt (negative dt back-predicts exactly).
TargetState transition(const TargetState& state, double dt);

/// Range / bearing / radial-velocity observation of a state from a radar
/// position. Throws GeometryError when the state sits on the radar.
Vector3 measure(const TargetState& state, const Vector2& radar_position);

/// 3x4 Jacobian of measure() with respect to the state it is evaluated at.
Matrix34 measure_jacobian(const TargetState& state, const Vector2& radar_position);

/// Jacobian of the measurement taken dt_back seconds before fusion time with
/// respect to the fusion-time state: J_h(F(-dt_back) s) * F(-dt_back).
Matrix34 measurement_jacobian(const TargetState& fusion_state, const Vector2& radar_position,
                              double dt_back);

struct MeasurementRecord {
  int radar_id = 0;
  int target_id = 0;
  double time = 0.0;
  Vector3 value = Vector3::Zero();     // range, bearing, radial velocity
  Vector3 noise_var = Vector3::Ones(); // diagonal of the error covariance
};

/// Noisy observations of one target by one radar at the scheduled times.
/// The truth is back-predicted from fusion time with the constant-velocity
/// model; noise is independent Gaussian with the given diagonal covariances.
std::vector<MeasurementRecord> synthesize_measurements(
    const TargetState& truth_at_fusion, double fusion_time, int radar_id, int target_id,
    const Vector2& radar_position, const std::vector<double>& times,
    const std::vector<Vector3>& noise_vars, RngStream& rng);

struct CompositeMeasure {
  TargetState state = TargetState::Zero();
  Matrix4 covariance = Matrix4::Identity();  // inverse information at the estimate
  int iterations = 0;
};

/// Maximum-likelihood fusion-time state from all records of one target,
/// by Gauss-Newton on the weighted least-squares cost. Bearing residuals are
/// wrapped; a step that increases the cost is halved up to 10 times.
/// Stops when the normalizer-weighted step norm drops below 1e-6.
CompositeMeasure composite_measure_ils(const std::vector<MeasurementRecord>& records,
                                       const std::vector<Vector2>& radar_positions,
                                       const TargetState& predicted_state, double fusion_time,
                                       double fusion_period);

}  // namespace hrcn
