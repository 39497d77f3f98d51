#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mplab {

inline constexpr int kMaxFiberDim = 4;

/// Fiber vector; fixed capacity so small-vector arithmetic never allocates.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxFiberDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxFiberDim, kMaxFiberDim>;

// Tolerances shared across modules.
inline constexpr double kEpsGeo = 1e-9;
inline constexpr double kEpsProj = 1e-10;
inline constexpr double kEpsNum = 1e-12;

struct Horizon {
  double start = 0.0;
  double end = 1.0;

  double length() const { return end - start; }
  bool contains(double t) const {
    const double slack = 1e-12 * (1.0 + std::abs(start) + std::abs(end));
    return t >= start - slack && t <= end + slack;
  }
  bool operator==(const Horizon&) const = default;
};

struct SpatialPoint {
  double x = 0.0;
  double y = 0.0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (time outside the horizon, point not on a boundary, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A state became non-finite during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_finite_time)
      : Error(what), last_finite_time_(last_finite_time) {}
  double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

/// Invalid configuration; `path` names the offending entry (e.g. "family.set.radius").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, std::string reason)
      : Error(path + ": " + reason), path_(std::move(path)), reason_(std::move(reason)) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

}  // namespace mplab
