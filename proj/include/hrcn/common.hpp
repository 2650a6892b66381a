#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace hrcn {

using Vector2 = Eigen::Vector2d;
using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;
using Matrix34 = Eigen::Matrix<double, 3, 4>;

/// Target state [x, xdot, y, ydot] in meters / meters-per-second.
using TargetState = Vector4;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent scenario/config input. Message names the field.
struct ConfigError : Error {
  using Error::Error;
};

/// A constraint set admits no solution. Carries the offending constraint
/// and, when applicable, the communications user it belongs to.
struct InfeasibleError : Error {
  InfeasibleError(const std::string& what, std::string constraint_name, int user = -1)
      : Error(what), constraint(std::move(constraint_name)), user_id(user) {}
  std::string constraint;
  int user_id;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

/// Normalizer diag(1, T0, 1, T0) that puts velocity errors on the same
/// scale as positions (velocity * fusion period = distance covered).
inline Matrix4 state_normalizer(double fusion_period) {
  Matrix4 m = Matrix4::Identity();
  m(1, 1) = fusion_period;
  m(3, 3) = fusion_period;
  return m;
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
/// Throws SingularMatrixError instead of returning NaNs.
inline Matrix4 spd_inverse(const Matrix4& m) {
  Eigen::LLT<Matrix4> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("matrix is not positive definite");
  }
  Matrix4 inv = llt.solve(Matrix4::Identity());
  return 0.5 * (inv + inv.transpose());
}

inline bool is_symmetric(const Matrix4& m, double tol = 1e-12) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

}  // namespace hrcn
