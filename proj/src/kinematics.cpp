#include "hrcn/kinematics.hpp"

#include <cmath>

namespace hrcn {

Matrix4 transition_matrix(double dt) {
  Matrix4 f = Matrix4::Identity();
  f(0, 1) = dt;
  f(2, 3) = dt;
  return f;
}

TargetState transition(const TargetState& state, double dt) {
  TargetState out = state;
  out[0] += dt * state[1];
  out[2] += dt * state[3];
  return out;
}

Vector3 measure(const TargetState& state, const Vector2& radar_position) {
  const double dx = state[0] - radar_position.x();
  const double dy = state[2] - radar_position.y();
  const double range = std::hypot(dx, dy);
  if (range <= 0.0) throw GeometryError("zero range between target and radar");
  Vector3 y;
  y[0] = range;
  y[1] = std::atan2(dy, dx);
  y[2] = (dx * state[1] + dy * state[3]) / range;
  return y;
}

Matrix34 measure_jacobian(const TargetState& state, const Vector2& radar_position) {
  const double dx = state[0] - radar_position.x();
  const double dy = state[2] - radar_position.y();
  const double r2 = dx * dx + dy * dy;
  const double range = std::sqrt(r2);
  if (range <= 0.0) throw GeometryError("zero range between target and radar");
  const double nu = (dx * state[1] + dy * state[3]) / range;

  Matrix34 h = Matrix34::Zero();
  h(0, 0) = dx / range;
  h(0, 2) = dy / range;
  h(1, 0) = -dy / r2;
  h(1, 2) = dx / r2;
  h(2, 0) = state[1] / range - nu * dx / r2;
  h(2, 1) = dx / range;
  h(2, 2) = state[3] / range - nu * dy / r2;
  h(2, 3) = dy / range;
  return h;
}

Matrix34 measurement_jacobian(const TargetState& fusion_state, const Vector2& radar_position,
                              double dt_back) {
  const TargetState at_measurement = transition(fusion_state, -dt_back);
  return measure_jacobian(at_measurement, radar_position) * transition_matrix(-dt_back);
}

std::vector<MeasurementRecord> synthesize_measurements(
    const TargetState& truth_at_fusion, double fusion_time, int radar_id, int target_id,
    const Vector2& radar_position, const std::vector<double>& times,
    const std::vector<Vector3>& noise_vars, RngStream& rng) {
  std::vector<MeasurementRecord> records;
  records.reserve(times.size());
  for (size_t m = 0; m < times.size(); ++m) {
    const Vector3& var = noise_vars.size() == 1 ? noise_vars[0] : noise_vars.at(m);
    MeasurementRecord rec;
    rec.radar_id = radar_id;
    rec.target_id = target_id;
    rec.time = times[m];
    const TargetState s = transition(truth_at_fusion, -(fusion_time - times[m]));
    rec.value = measure(s, radar_position) + var.cwiseSqrt().cwiseProduct(rng.normal3());
    rec.noise_var = var;
    records.push_back(rec);
  }
  return records;
}

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double weighted_cost(const std::vector<MeasurementRecord>& records,
                     const std::vector<Vector2>& radar_positions, const TargetState& s,
                     double fusion_time) {
  double cost = 0.0;
  for (const MeasurementRecord& rec : records) {
    const TargetState sm = transition(s, -(fusion_time - rec.time));
    Vector3 r = rec.value - measure(sm, radar_positions.at(rec.radar_id));
    r[1] = wrap_angle(r[1]);
    cost += (r.array().square() / rec.noise_var.array()).sum();
  }
  return cost;
}

}  // namespace

CompositeMeasure composite_measure_ils(const std::vector<MeasurementRecord>& records,
                                       const std::vector<Vector2>& radar_positions,
                                       const TargetState& predicted_state, double fusion_time,
                                       double fusion_period) {
  if (records.empty()) throw Error("composite measure needs at least one measurement");

  const Matrix4 weight = state_normalizer(fusion_period);
  TargetState s = predicted_state;
  double cost = weighted_cost(records, radar_positions, s, fusion_time);

  constexpr int kMaxIters = 50;
  Matrix4 info = Matrix4::Zero();
  int iter = 0;
  for (; iter < kMaxIters; ++iter) {
    info.setZero();
    Vector4 rhs = Vector4::Zero();
    for (const MeasurementRecord& rec : records) {
      const double dt_back = fusion_time - rec.time;
      const TargetState sm = transition(s, -dt_back);
      const Matrix34 h = measure_jacobian(sm, radar_positions.at(rec.radar_id)) *
                         transition_matrix(-dt_back);
      Vector3 r = rec.value - measure(sm, radar_positions.at(rec.radar_id));
      r[1] = wrap_angle(r[1]);
      const Vector3 w = rec.noise_var.cwiseInverse();
      info.noalias() += h.transpose() * w.asDiagonal() * h;
      rhs.noalias() += h.transpose() * w.asDiagonal() * r;
    }
    info = 0.5 * (info + info.transpose());

    Eigen::LDLT<Matrix4> ldlt(info);
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0).any() ||
        ldlt.vectorD().minCoeff() < 1e-12 * ldlt.vectorD().maxCoeff()) {
      throw SingularMatrixError(
          "composite-measure information matrix is singular (unobservable geometry)");
    }
    Vector4 step = ldlt.solve(rhs);

    // Halve steps that make things worse.
    double trial_cost = 0.0;
    TargetState trial = s;
    int halvings = 0;
    for (; halvings <= 10; ++halvings) {
      trial = s + step;
      trial_cost = weighted_cost(records, radar_positions, trial, fusion_time);
      if (trial_cost <= cost + 1e-12 * (1.0 + cost)) break;
      step *= 0.5;
    }
    if (halvings > 10) break;  // no descent direction left; accept current estimate
    s = trial;
    cost = trial_cost;
    if ((weight * step).norm() < 1e-6) {
      ++iter;
      break;
    }
  }
  if (iter >= kMaxIters) {
    throw ConvergenceError("composite-measure estimation did not converge in 50 iterations");
  }

  // Recompute the information at the estimate; its inverse approximates the
  // estimator covariance.
  Matrix4 final_info = Matrix4::Zero();
  for (const MeasurementRecord& rec : records) {
    const double dt_back = fusion_time - rec.time;
    const TargetState sm = transition(s, -dt_back);
    const Matrix34 h = measure_jacobian(sm, radar_positions.at(rec.radar_id)) *
                       transition_matrix(-dt_back);
    final_info.noalias() += h.transpose() * rec.noise_var.cwiseInverse().asDiagonal() * h;
  }
  final_info = 0.5 * (final_info + final_info.transpose());

  CompositeMeasure cm;
  cm.state = s;
  cm.covariance = spd_inverse(final_info);
  cm.iterations = iter;
  return cm;
}

}  // namespace hrcn
