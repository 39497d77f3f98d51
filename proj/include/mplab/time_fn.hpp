#pragma once

#include <span>
#include <vector>

namespace mplab {

/// Scalar function of time drawn from a small closed family of analytic forms.
///
///   constant    c
///   linear      a + b t
///   reciprocal  a / (T* - t) + c        (T* must lie outside the evaluation domain)
///   sinusoid    a + b sin(w t + phi)
///   polynomial  c0 + c1 t + c2 t^2 + ...
class TimeFn {
 public:
  enum class Kind { constant, linear, reciprocal, sinusoid, polynomial };

  TimeFn() : TimeFn(constant(0.0)) {}

  static TimeFn constant(double value);
  static TimeFn linear(double offset, double slope);
  static TimeFn reciprocal(double scale, double blowup_time, double offset = 0.0);
  static TimeFn sinusoid(double offset, double amplitude, double frequency, double phase = 0.0);
  static TimeFn polynomial(std::vector<double> coefficients);

  double operator()(double t) const;
  double derivative(double t) const;

  Kind kind() const { return kind_; }
  std::span<const double> params() const { return params_; }
  bool is_time_constant() const;

  /// Throws DomainError if the function is not finite and continuous on [t0, t1].
  void validate_on(double t0, double t1) const;

  bool operator==(const TimeFn&) const = default;

 private:
  TimeFn(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  std::vector<double> params_;
};

}  // namespace mplab
