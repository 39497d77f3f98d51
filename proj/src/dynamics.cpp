#include "mplab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double smoothstep(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  return z * z * (3.0 - 2.0 * z);
}

// Time grid t0, t0 + dt, ..., t1 with the last step shortened (or snapped) to land on t1.
std::vector<double> time_grid(double t0, double t1, double dt) {
  const double span = t1 - t0;
  const auto n = static_cast<long>(std::ceil(span / dt - 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  grid.push_back(t0);
  for (long i = 1; i <= n; ++i) grid.push_back(i == n ? t1 : t0 + static_cast<double>(i) * dt);
  return grid;
}

Vec rk4_step(const ReactionField& F, const SpatialPoint& x, const Vec& y, double t, double h) {
  const Vec k1 = F(x, y, t);
  const Vec k2 = F(x, y + 0.5 * h * k1, t + 0.5 * h);
  const Vec k3 = F(x, y + 0.5 * h * k2, t + 0.5 * h);
  const Vec k4 = F(x, y + h * k3, t + h);
  return y + (h / 6.0) * (((k1 + 2.0 * k2) + 2.0 * k3) + k4);
}

}  // namespace

ReactionField::ReactionField(ReactionSpec spec, int dim) : spec_(std::move(spec)), dim_(dim) {
  if (dim_ < 1 || dim_ > kMaxFiberDim) throw DomainError("reaction field: fiber dimension must be 1..4");
  std::visit(overloaded{[](const ZeroReaction&) {}, [](const SquareReaction&) {},
                        [&](const LinearReaction& r) {
                          if (static_cast<int>(r.matrix.size()) != dim_)
                            throw DomainError("linear reaction: matrix must be k x k");
                          for (const auto& row : r.matrix)
                            if (static_cast<int>(row.size()) != dim_)
                              throw DomainError("linear reaction: matrix must be k x k");
                        },
                        [&](const RotationReaction& r) {
                          if (dim_ != 2) throw DomainError("rotation reaction requires fiber dimension 2");
                          if (!std::isfinite(r.omega)) throw DomainError("rotation reaction: omega must be finite");
                        },
                        [&](const RadialBumpReaction& r) {
                          if (static_cast<int>(r.direction.size()) != dim_)
                            throw DomainError("radial bump: direction must have the fiber dimension");
                          bump_direction_ = Eigen::Map<const Eigen::VectorXd>(r.direction.data(), dim_);
                          const double n = bump_direction_.norm();
                          if (!(n > 0.0)) throw DomainError("radial bump: direction must be nonzero");
                          bump_direction_ /= n;
                          if (!(r.width > 0.0)) throw DomainError("radial bump: width must be positive");
                        },
                        [&](const ExpressionReaction& r) {
                          if (static_cast<int>(r.components.size()) != dim_)
                            throw DomainError("expression reaction: need one expression per fiber component");
                          for (const auto& e : r.components)
                            for (int i = dim_; i < kMaxFiberDim; ++i)
                              if (e.uses("v" + std::to_string(i)))
                                throw DomainError("expression \"" + e.source() + "\" refers to v" + std::to_string(i) +
                                                  " beyond the fiber dimension");
                        }},
             spec_);
}

Vec ReactionField::operator()(const SpatialPoint& x, const Vec& sigma, double t) const {
  return std::visit(overloaded{[&](const ZeroReaction&) -> Vec { return Vec::Zero(dim_); },
                               [&](const SquareReaction&) -> Vec { return sigma.cwiseProduct(sigma); },
                               [&](const LinearReaction& r) -> Vec {
                                 Vec out = Vec::Zero(dim_);
                                 for (int i = 0; i < dim_; ++i)
                                   for (int j = 0; j < dim_; ++j)
                                     out[i] += r.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](t) *
                                               sigma[j];
                                 return out;
                               },
                               [&](const RotationReaction& r) -> Vec {
                                 Vec out(2);
                                 out << -r.omega * sigma[1], r.omega * sigma[0];
                                 return out;
                               },
                               [&](const RadialBumpReaction& r) -> Vec {
                                 const double z = (bump_direction_.dot(sigma) - r.threshold) / r.width;
                                 return r.strength * smoothstep(z) * bump_direction_;
                               },
                               [&](const ExpressionReaction& r) -> Vec {
                                 ExprVars vars;
                                 vars.x = x.x;
                                 vars.y = x.y;
                                 vars.t = t;
                                 for (int i = 0; i < dim_; ++i) vars.v[static_cast<std::size_t>(i)] = sigma[i];
                                 Vec out(dim_);
                                 for (int i = 0; i < dim_; ++i) out[i] = r.components[static_cast<std::size_t>(i)](vars);
                                 return out;
                               }},
                    spec_);
}

bool ReactionField::spatially_homogeneous() const {
  if (const auto* e = std::get_if<ExpressionReaction>(&spec_)) {
    return std::none_of(e->components.begin(), e->components.end(),
                        [](const Expression& c) { return c.uses("x") || c.uses("y"); });
  }
  return true;
}

ReactionField& ReactionField::calibrate(const ConvexFamily& family, const SpatialPoint& x) {
  if (family.dim() != dim_) throw DomainError("reaction field and family have different fiber dimensions");
  constexpr int kTimes = 9;
  const int per_dim = dim_ == 1 ? 41 : dim_ == 2 ? 13 : dim_ == 3 ? 7 : 5;
  const auto& h = family.horizon();
  double best = 0.0;
  for (int it = 0; it < kTimes; ++it) {
    const double t = it == kTimes - 1 ? h.end : h.start + h.length() * it / (kTimes - 1);
    const ConvexSet set = family.at(t);
    const double reach = 2.0 * set.diameter();
    Vec lo(dim_), hi(dim_);
    for (int i = 0; i < dim_; ++i) {
      hi[i] = set.support(Vec::Unit(dim_, i)) + reach;
      lo[i] = -set.support(-Vec::Unit(dim_, i)) - reach;
    }
    int total = 1;
    for (int i = 0; i < dim_; ++i) total *= per_dim;
    for (int code = 0; code < total; ++code) {
      Vec p(dim_);
      int rest = code;
      for (int i = 0; i < dim_; ++i) {
        const int a = rest % per_dim;
        rest /= per_dim;
        p[i] = lo[i] + (hi[i] - lo[i]) * a / (per_dim - 1);
      }
      const Vec f0 = (*this)(x, p, t);
      const double delta = 1e-6 * (1.0 + p.norm());
      double frob = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const Vec col = ((*this)(x, p + delta * Vec::Unit(dim_, i), t) - f0) / delta;
        frob += col.squaredNorm();
      }
      if (!std::isfinite(frob)) throw DomainError("reaction field is not finite near the family");
      best = std::max(best, std::sqrt(frob));
    }
  }
  lipschitz_ = best;
  return *this;
}

// ---------------------------------------------------------------------------

Trajectory integrate_fiber(const ReactionField& F, const SpatialPoint& x, const Vec& v0, double t0, double t1,
                           double dt, bool estimate_error) {
  if (!(t1 > t0)) throw DomainError("integrate_fiber: need t0 < t1");
  if (!(dt > 0.0)) throw DomainError("integrate_fiber: need dt > 0");
  if (v0.size() != F.dim()) throw DomainError("integrate_fiber: initial value has the wrong dimension");
  if (!v0.allFinite()) throw DomainError("integrate_fiber: initial value is not finite");

  Trajectory traj;
  traj.step = dt;
  traj.times = time_grid(t0, t1, dt);
  traj.values.reserve(traj.times.size());
  traj.values.push_back(v0);
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double t = traj.times[i - 1];
    Vec next = rk4_step(F, x, traj.values.back(), t, traj.times[i] - t);
    if (!next.allFinite()) {
      std::ostringstream msg;
      msg << "fiber ODE blew up after t=" << t;
      throw BlowUpError(msg.str(), t);
    }
    traj.values.push_back(std::move(next));
  }
  traj.error_estimate = std::numeric_limits<double>::quiet_NaN();
  if (estimate_error) {
    try {
      const Trajectory coarse = integrate_fiber(F, x, v0, t0, t1, 2.0 * dt, false);
      traj.error_estimate = (coarse.final_value() - traj.final_value()).norm() / 15.0;
    } catch (const BlowUpError&) {
      traj.error_estimate = std::numeric_limits<double>::infinity();
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------

HypothesisReport check_ode_hypothesis(const SpaceTimeTrack& track, const ReactionField& F,
                                      const HypothesisOptions& options) {
  if (options.space_samples < 1 || options.time_samples < 1)
    throw DomainError("check_ode_hypothesis: sample counts must be at least 1");
  if (F.dim() != track.dim()) throw DomainError("check_ode_hypothesis: dimension mismatch");
  const auto& h = track.horizon();
  const auto n_time = static_cast<std::size_t>(options.time_samples);

  HypothesisReport report;
  report.space_samples = options.space_samples;
  report.times.resize(n_time);
  std::vector<double> shift(n_time, 0.0);
  if (options.jitter_seed) {
    std::mt19937_64 rng(*options.jitter_seed);
    std::uniform_real_distribution<double> unit(0.0, 0.5);
    for (auto& u : shift) u = unit(rng);
  }
  for (std::size_t j = 0; j < n_time; ++j)
    report.times[j] = h.start + h.length() * (static_cast<double>(j) + shift[j]) / static_cast<double>(n_time);

  std::vector<std::optional<ForwardConeProbe>> probes(n_time);
  std::vector<std::optional<ConvexSet>> avoid(n_time);
  std::vector<std::vector<Vec>> points(n_time);
  kernels::for_each_index(options.exec, n_time, [&](std::size_t j) {
    probes[j].emplace(track.main(), report.times[j]);
    if (track.avoidance()) avoid[j].emplace(track.avoidance()->at(report.times[j]));
    points[j] = probes[j]->slice().boundary_samples(options.space_samples);
  });

  std::vector<std::size_t> offsets(n_time + 1, 0);
  for (std::size_t j = 0; j < n_time; ++j) offsets[j + 1] = offsets[j] + points[j].size();
  report.samples.resize(offsets.back());

  kernels::for_each_index(options.exec, report.samples.size(), [&](std::size_t i) {
    const auto j = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), i) - offsets.begin() - 1);
    auto& sample = report.samples[i];
    sample.v = points[j][i - offsets[j]];
    sample.t = report.times[j];
    if (avoid[j] && avoid[j]->distance(sample.v) <= options.exclusion_buffer) {
      sample.excluded_by_avoidance = true;
      return;
    }
    sample.verdict = probes[j]->classify(sample.v, F(options.point, sample.v, sample.t));
  });

  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    if (s.excluded_by_avoidance) {
      ++report.excluded;
      continue;
    }
    switch (s.verdict->value) {
      case ConeVerdict::Value::member:
        ++report.members;
        break;
      case ConeVerdict::Value::non_member:
        ++report.non_members;
        report.failure_locus.push_back(i);
        break;
      case ConeVerdict::Value::inconclusive:
        ++report.inconclusive;
        break;
    }
  }
  report.holds_everywhere_tested = report.non_members == 0 && report.inconclusive == 0;
  return report;
}

// ---------------------------------------------------------------------------

PreservationReport check_ode_preservation(const SpaceTimeTrack& track, const ReactionField& F,
                                          const PreservationOptions& options) {
  if (options.starts < 1 && options.explicit_starts.empty())
    throw DomainError("check_ode_preservation: need at least one start");
  if (!(options.dt > 0.0)) throw DomainError("check_ode_preservation: need dt > 0");
  if (F.dim() != track.dim()) throw DomainError("check_ode_preservation: dimension mismatch");
  const auto& h = track.horizon();
  const ConvexSet k0 = track.main().at(h.start);

  std::vector<Vec> candidates = options.explicit_starts;
  if (candidates.empty()) {
    const auto boundary = k0.boundary_samples(std::max(1, options.starts / 2));
    const Vec center = k0.reference_point();
    candidates = boundary;
    for (const auto& b : boundary) candidates.push_back(center + 0.5 * (b - center));
    candidates.push_back(center);
  }

  PreservationReport report;
  report.dt = options.dt;
  std::optional<ConvexSet> a0;
  if (track.avoidance()) a0.emplace(track.avoidance()->at(h.start));
  const double avoid_tol = kEpsGeo * std::max(1.0, k0.diameter());
  for (const auto& c : candidates) {
    if (c.size() != track.dim()) throw DomainError("check_ode_preservation: start has the wrong dimension");
    if (a0 && a0->distance(c) <= avoid_tol) {
      ++report.skipped_in_avoidance;
      continue;
    }
    report.starts.push_back(c);
  }

  const std::vector<double> grid = time_grid(h.start, h.end, options.dt);
  std::vector<std::optional<ConvexSet>> main_slices(grid.size());
  std::vector<std::optional<ConvexSet>> avoid_slices(grid.size());
  kernels::for_each_index(options.exec, grid.size(), [&](std::size_t i) {
    main_slices[i].emplace(track.main().at(grid[i]));
    if (track.avoidance()) avoid_slices[i].emplace(track.avoidance()->at(grid[i]));
  });

  const std::size_t n = report.starts.size();
  constexpr auto kNever = std::numeric_limits<std::size_t>::max();
  report.excursions.assign(n, 0.0);
  std::vector<std::size_t> exit_step(n, kNever);
  std::vector<std::size_t> entry_step(n, kNever);
  std::vector<std::optional<BlowUpError>> failures(n);

  kernels::for_each_index(options.exec, n, [&](std::size_t s) {
    Trajectory traj;
    try {
      traj = integrate_fiber(F, options.point, report.starts[s], h.start, h.end, options.dt, false);
    } catch (const BlowUpError& e) {
      failures[s].emplace(e);
      return;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
      const double d = main_slices[i]->distance(traj.values[i]);
      worst = std::max(worst, d);
      if (exit_step[s] == kNever && d > options.exit_tolerance) exit_step[s] = i;
      if (entry_step[s] == kNever && avoid_slices[i] && avoid_slices[i]->distance(traj.values[i]) <= avoid_tol)
        entry_step[s] = i;
    }
    report.excursions[s] = worst;
  });

  auto earliest = [&](const std::vector<std::size_t>& steps) -> std::optional<StartEvent> {
    std::optional<StartEvent> best;
    std::size_t best_step = kNever;
    for (std::size_t s = 0; s < n; ++s) {
      if (steps[s] < best_step) {
        best_step = steps[s];
        best = StartEvent{s, grid[steps[s]]};
      }
    }
    return best;
  };
  for (std::size_t s = 0; s < n; ++s) report.max_excursion = std::max(report.max_excursion, report.excursions[s]);
  report.first_exit = earliest(exit_step);
  report.first_avoidance_entry = earliest(entry_step);

  for (std::size_t s = 0; s < n; ++s)
    if (failures[s]) throw PreservationBlowUp(*failures[s], report);
  return report;
}

}  // namespace mplab
