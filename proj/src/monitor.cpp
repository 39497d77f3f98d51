#include "mplab/monitor.hpp"
#include "mplab/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mplab {

std::pair<double, std::size_t> sup_distance(const Section& s, const SpaceTimeTrack& track, double t,
                                            kernels::Exec exec) {
  if (s.dim != track.dim()) throw DomainError("sup_distance: section and family dimensions differ");
  const ConvexSet k = track.main().at(t);
  std::vector<double> d(s.nodes());
  kernels::for_each_index(exec, d.size(), [&](std::size_t n) { d[n] = k.distance(s.at(n)); });
  return kernels::serial::argmax(d);
}

double avoidance_margin(const Section& s, const SpaceTimeTrack& track, double t, kernels::Exec exec) {
  if (!track.avoidance()) throw DomainError("avoidance_margin: the track has no avoidance family");
  if (s.dim != track.dim()) throw DomainError("avoidance_margin: section and family dimensions differ");
  const ConvexSet a = track.avoidance()->at(t);
  std::vector<double> d(s.nodes());
  kernels::for_each_index(exec, d.size(), [&](std::size_t n) { d[n] = a.distance(s.at(n)); });
  return kernels::serial::argmin(d).first;
}

double dini_forward(std::span<const double> f, double dt, std::size_t j, int window) {
  if (j + 1 >= f.size()) throw DomainError("dini_forward: no forward sample after the last index");
  if (window < 1) throw DomainError("dini_forward: window must be at least 1");
  const std::size_t w_max = std::min<std::size_t>(static_cast<std::size_t>(window), f.size() - 1 - j);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 1; w <= w_max; ++w)
    best = std::max(best, (f[j + w] - f[j]) / (static_cast<double>(w) * dt));
  return best;
}

bool check_gronwall(std::span<const double> f, double dt, double C, bool f_start_nonpositive, int window) {
  const double slack = 10.0 * dt * (1.0 + C);
  for (std::size_t j = 0; j + 1 < f.size(); ++j) {
    if (f[j] < -kEpsNum) continue;
    if (dini_forward(f, dt, j, window) > C * f[j] + slack) return false;
  }
  if (f_start_nonpositive) {
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f[j] > slack * std::exp(C * static_cast<double>(j) * dt)) return false;
  }
  return true;
}

bool check_gronwall(const MonitorSeries& series, double C, bool f_start_nonpositive) {
  return check_gronwall(series.f, series.dt, C, f_start_nonpositive, series.window);
}

std::vector<SupDerivativeSample> dini_of_sup(const std::vector<double>& S,
                                             const std::function<double(double, double)>& g,
                                             const std::function<double(double, double)>& dgdt, double t0,
                                             double dt, std::size_t n, int window) {
  if (S.empty()) throw DomainError("dini_of_sup: sample set must be nonempty");
  if (n < 2) throw DomainError("dini_of_sup: need at least two times");
  std::vector<double> f(n);
  std::vector<std::vector<double>> values(n, std::vector<double>(S.size()));
  for (std::size_t j = 0; j < n; ++j) {
    const double t = t0 + static_cast<double>(j) * dt;
    for (std::size_t i = 0; i < S.size(); ++i) values[j][i] = g(S[i], t);
    f[j] = *std::max_element(values[j].begin(), values[j].end());
  }
  std::vector<SupDerivativeSample> out;
  out.reserve(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double t = t0 + static_cast<double>(j) * dt;
    double scale = 1.0;
    for (double v : values[j]) scale = std::max(scale, std::abs(v));
    const double tie = 1e-9 * scale;
    double rate = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (values[j][i] < f[j] - tie) continue;
      const double r = dgdt ? dgdt(S[i], t) : (g(S[i], t + dt) - g(S[i], t - dt)) / (2.0 * dt);
      rate = std::max(rate, r);
    }
    out.push_back({t, f[j], dini_forward(f, dt, j, window), rate});
  }
  return out;
}

SemicontinuityReport semicontinuity_probe(std::span<const double> f, double dt) {
  SemicontinuityReport rep;
  if (f.size() < 2) return rep;
  std::vector<double> slopes(f.size() - 1);
  double peak = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j) slopes[j] = std::abs(f[j + 1] - f[j]) / dt;
  for (double v : f) peak = std::max(peak, std::abs(v));
  auto nth = slopes.begin() + static_cast<std::ptrdiff_t>((slopes.size() - 1) * 9 / 10);
  std::nth_element(slopes.begin(), nth, slopes.end());
  rep.jump_tol = std::max(100.0 * dt * *nth, 1e-9 * (1.0 + peak));
  for (std::size_t j = 0; j + 1 < f.size(); ++j)
    if (f[j + 1] < f[j] - rep.jump_tol) rep.right_flags.push_back(j);
  for (std::size_t j = 1; j < f.size(); ++j)
    if (f[j - 1] > f[j] + rep.jump_tol) rep.left_flags.push_back(j);
  return rep;
}

TheoremVerdict theorem_verdict(const HypothesisReport& hyp, const MonitorSeries& series, double tol_contain,
                               double margin_floor, double lipschitz) {
  if (series.size() == 0) throw DomainError("theorem_verdict: empty monitor series");
  TheoremVerdict v;
  v.hypothesis_ok = hyp.holds_everywhere_tested;
  v.max_f = *std::max_element(series.f.begin(), series.f.end());
  v.containment_ok = v.max_f <= tol_contain;
  if (series.has_margins()) {
    v.min_margin = *std::min_element(series.margins.begin(), series.margins.end());
    v.avoidance_ok = *v.min_margin >= margin_floor;
  } else {
    v.avoidance_ok = true;
  }
  v.gronwall_ok = check_gronwall(series, lipschitz, series.f.front() <= kEpsGeo);

  std::ostringstream d;
  d << "hypothesis: " << hyp.members << " member, " << hyp.non_members << " non-member, " << hyp.inconclusive
    << " inconclusive, " << hyp.excluded << " excluded; max f = " << v.max_f << " (tol " << tol_contain << ")";
  if (v.min_margin) d << "; min margin = " << *v.min_margin << " (floor " << margin_floor << ")";
  d << "; C_F = " << lipschitz;
  v.details = d.str();
  return v;
}

double default_tol_contain(const ManifoldGrid& grid, double dt, double c_tol) {
  return c_tol * (grid.h() * grid.h() + dt);
}

namespace {

void finish_series(MonitorSeries& s, double tol_contain) {
  const std::size_t n = s.size();
  s.dini.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j + 1 < n; ++j) s.dini[j] = dini_forward(s.f, s.dt, j, s.window);
  s.flags.assign(n, "");
  auto add = [&](std::size_t j, const char* flag) {
    if (!s.flags[j].empty()) s.flags[j] += '|';
    s.flags[j] += flag;
  };
  for (std::size_t j = 0; j < n; ++j)
    if (s.f[j] > tol_contain) add(j, "excursion");
  const auto probe = semicontinuity_probe(s.f, s.dt);
  for (auto j : probe.right_flags) add(j, "right_jump");
  for (auto j : probe.left_flags) add(j, "left_jump");
}

}  // namespace

MonitoredRun run_monitored(const PdeConfig& config, double tol_contain) {
  const StepPlan plan = plan_steps(config.horizon(), config.dt, config.record_every);
  MonitoredRun run;
  MonitorSeries& s = run.series;
  s.dt = plan.dt * config.record_every;
  const bool avoid = config.track.avoidance().has_value();
  auto hook = [&](const Section& state) {
    const auto [f, node] = sup_distance(state, config.track, state.time, config.exec);
    s.times.push_back(state.time);
    s.f.push_back(f);
    s.argmax.push_back(node);
    if (avoid) s.margins.push_back(avoidance_margin(state, config.track, state.time, config.exec));
  };
  try {
    run.final_state = run_simulation(config, hook);
  } catch (const BlowUpError& e) {
    finish_series(s, tol_contain);
    throw MonitoredBlowUp(e, s);
  }
  finish_series(s, tol_contain);
  return run;
}

std::string monitor_csv(const MonitorSeries& s) {
  std::string out = "t,f,argmax_node,margin,dini,flags\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    out += format_number(s.times[j]);
    out += ',' + format_number(s.f[j]);
    out += ',' + std::to_string(s.argmax[j]);
    out += ',';
    if (s.has_margins()) out += format_number(s.margins[j]);
    out += ',';
    if (j < s.dini.size() && !std::isnan(s.dini[j])) out += format_number(s.dini[j]);
    out += ',';
    if (j < s.flags.size()) out += s.flags[j];
    out += '\n';
  }
  return out;
}

}  // namespace mplab
