#include "mplab/time_fn.hpp"

#include "mplab/types.hpp"

#include <cmath>
#include <sstream>

namespace mplab {

TimeFn TimeFn::constant(double value) { return {Kind::constant, {value}}; }

TimeFn TimeFn::linear(double offset, double slope) { return {Kind::linear, {offset, slope}}; }

TimeFn TimeFn::reciprocal(double scale, double blowup_time, double offset) {
  return {Kind::reciprocal, {scale, blowup_time, offset}};
}

TimeFn TimeFn::sinusoid(double offset, double amplitude, double frequency, double phase) {
  return {Kind::sinusoid, {offset, amplitude, frequency, phase}};
}

TimeFn TimeFn::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  return {Kind::polynomial, std::move(coefficients)};
}

double TimeFn::operator()(double t) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::constant:
      return p[0];
    case Kind::linear:
      return p[0] + p[1] * t;
    case Kind::reciprocal:
      return p[0] / (p[1] - t) + p[2];
    case Kind::sinusoid:
      return p[0] + p[1] * std::sin(p[2] * t + p[3]);
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
  }
  return 0.0;
}

double TimeFn::derivative(double t) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::linear:
      return p[1];
    case Kind::reciprocal: {
      const double d = p[1] - t;
      return p[0] / (d * d);
    }
    case Kind::sinusoid:
      return p[1] * p[2] * std::cos(p[2] * t + p[3]);
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = p.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * p[i];
      return acc;
    }
  }
  return 0.0;
}

bool TimeFn::is_time_constant() const {
  switch (kind_) {
    case Kind::constant:
      return true;
    case Kind::linear:
      return params_[1] == 0.0;
    case Kind::reciprocal:
      return params_[0] == 0.0;
    case Kind::sinusoid:
      return params_[1] == 0.0 || params_[2] == 0.0;
    case Kind::polynomial:
      for (std::size_t i = 1; i < params_.size(); ++i)
        if (params_[i] != 0.0) return false;
      return true;
  }
  return false;
}

void TimeFn::validate_on(double t0, double t1) const {
  for (double v : params_) {
    if (!std::isfinite(v)) throw DomainError("time function has a non-finite parameter");
  }
  if (kind_ == Kind::reciprocal && params_[0] != 0.0) {
    const double pole = params_[1];
    if (pole >= t0 && pole <= t1) {
      std::ostringstream msg;
      msg << "reciprocal time function has its pole T*=" << pole << " inside [" << t0 << ", " << t1 << "]";
      throw DomainError(msg.str());
    }
  }
}

}  // namespace mplab
