#pragma once

#include "mplab/dynamics.hpp"
#include "mplab/field.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mplab {

inline constexpr int kDiniWindow = 8;

struct MonitorSeries {
  std::vector<double> times;
  std::vector<double> f;  // sup-distance to K(t)
  std::vector<std::size_t> argmax;
  std::vector<double> margins;  // empty without an avoidance family
  std::vector<double> dini;     // NaN at the last record
  std::vector<std::string> flags;
  double dt = 0.0;  // spacing between records
  int window = kDiniWindow;

  bool has_margins() const { return !margins.empty(); }
  std::size_t size() const { return times.size(); }
};

struct TheoremVerdict {
  bool hypothesis_ok = false;
  bool containment_ok = false;
  bool avoidance_ok = false;
  bool gronwall_ok = false;
  double max_f = 0.0;
  std::optional<double> min_margin;
  std::string details;
};

/// (max over nodes of distance(main, t, s(node)), smallest maximizing node).
std::pair<double, std::size_t> sup_distance(const Section& s, const SpaceTimeTrack& track, double t,
                                            kernels::Exec exec = kernels::Exec::parallel);

/// min over nodes of distance(avoidance, t, s(node)).
double avoidance_margin(const Section& s, const SpaceTimeTrack& track, double t,
                        kernels::Exec exec = kernels::Exec::parallel);

/// max over w in 1..min(window, remaining) of (f[j+w] - f[j]) / (w dt).
double dini_forward(std::span<const double> f, double dt, std::size_t j, int window = kDiniWindow);

/// For every j with f_j >= -eps_num: dini_forward(j) <= C f_j + slack, slack = 10 dt (1 + C).
/// With f_start_nonpositive, additionally f_j <= slack e^(C (t_j - t_0)).
bool check_gronwall(std::span<const double> f, double dt, double C, bool f_start_nonpositive,
                    int window = kDiniWindow);
bool check_gronwall(const MonitorSeries& series, double C, bool f_start_nonpositive);

struct SupDerivativeSample {
  double t = 0.0;
  double f = 0.0;
  double dini = 0.0;            // forward Dini estimate of f = max_S g
  double argmax_rate = 0.0;     // max of dg/dt over the (tolerant) argmax set
};

/// Evaluates f(t) = max_s g(s, t) on times t0 + j dt (j < n) and compares its forward Dini
/// estimate with the largest dg/dt over the argmax set. When `dgdt` is empty a central
/// difference of g with step dt is used. Returns one entry per j < n - 1.
std::vector<SupDerivativeSample> dini_of_sup(const std::vector<double>& S,
                                             const std::function<double(double, double)>& g,
                                             const std::function<double(double, double)>& dgdt, double t0,
                                             double dt, std::size_t n, int window = kDiniWindow);

struct SemicontinuityReport {
  std::vector<std::size_t> right_flags;  // f[j+1] < f[j] - jump_tol
  std::vector<std::size_t> left_flags;   // f[j-1] > f[j] + jump_tol
  double jump_tol = 0.0;

  bool empty() const { return right_flags.empty() && left_flags.empty(); }
};

/// jump_tol = max(100 dt L, 1e-9 (1 + max|f|)) with L the 90th percentile of |f[j+1] - f[j]| / dt.
SemicontinuityReport semicontinuity_probe(std::span<const double> f, double dt);

TheoremVerdict theorem_verdict(const HypothesisReport& hyp, const MonitorSeries& series, double tol_contain,
                               double margin_floor, double lipschitz);

/// c_tol (h^2 + dt).
double default_tol_contain(const ManifoldGrid& grid, double dt, double c_tol = 10.0);

struct MonitoredRun {
  Section final_state;
  MonitorSeries series;
};

class MonitoredBlowUp : public BlowUpError {
 public:
  MonitoredBlowUp(const BlowUpError& cause, MonitorSeries partial)
      : BlowUpError(cause.what(), cause.last_finite_time()), partial_(std::move(partial)) {}
  const MonitorSeries& partial() const { return partial_; }

 private:
  MonitorSeries partial_;
};

/// run_simulation with sup-distance, margin, Dini and flag columns filled in. Records where
/// f exceeds `tol_contain` are flagged "excursion".
MonitoredRun run_monitored(const PdeConfig& config, double tol_contain);

/// Columns t, f, argmax_node, margin, dini, flags.
std::string monitor_csv(const MonitorSeries& series);

}  // namespace mplab
