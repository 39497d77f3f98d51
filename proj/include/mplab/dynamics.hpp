#pragma once

#include "mplab/expression.hpp"
#include "mplab/geometry.hpp"
#include "mplab/kernels.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace mplab {

// ---------------------------------------------------------------------------
// Reaction fields F(x, sigma, t).
// ---------------------------------------------------------------------------

struct ZeroReaction {
  bool operator==(const ZeroReaction&) const = default;
};

/// Componentwise sigma^2.
struct SquareReaction {
  bool operator==(const SquareReaction&) const = default;
};

/// A(t) sigma.
struct LinearReaction {
  std::vector<TimeVec> matrix;
  bool operator==(const LinearReaction&) const = default;
};

/// omega J sigma with J the counterclockwise quarter turn (k = 2).
struct RotationReaction {
  double omega = 1.0;
  bool operator==(const RotationReaction&) const = default;
};

/// strength * smoothstep((d . sigma - threshold) / width) * d, d = direction / |direction|.
/// Vanishes on {d . sigma <= threshold}; smoothstep(z) = 3z^2 - 2z^3 on [0, 1], clamped outside.
struct RadialBumpReaction {
  double strength = 1.0;
  std::vector<double> direction;
  double threshold = 0.0;
  double width = 1.0;
  bool operator==(const RadialBumpReaction&) const = default;
};

/// One expression per fiber component in x, y, t, v0..v3.
struct ExpressionReaction {
  std::vector<Expression> components;
  bool operator==(const ExpressionReaction&) const = default;
};

using ReactionSpec =
    std::variant<ZeroReaction, SquareReaction, LinearReaction, RotationReaction, RadialBumpReaction, ExpressionReaction>;

class ReactionField {
 public:
  ReactionField(ReactionSpec spec, int dim);

  Vec operator()(const SpatialPoint& x, const Vec& sigma, double t) const;

  const ReactionSpec& spec() const { return spec_; }
  int dim() const { return dim_; }
  bool spatially_homogeneous() const;

  /// Lipschitz constant in sigma sampled over the 2-diameter neighborhood of `family` across its
  /// horizon (finite-difference Jacobians, Frobenius norm). Stored on the field.
  ReactionField& calibrate(const ConvexFamily& family, const SpatialPoint& x);
  /// C_F from calibrate(); 0 before calibration.
  double lipschitz() const { return lipschitz_; }

 private:
  ReactionSpec spec_;
  int dim_;
  Vec bump_direction_;
  double lipschitz_ = 0.0;
};

// ---------------------------------------------------------------------------
// Fiber ODE integration.
// ---------------------------------------------------------------------------

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> values;
  double step = 0.0;
  /// Step-doubling estimate |y(dt) - y(2dt)| / 15 of the endpoint error (NaN when not computed).
  double error_estimate = 0.0;

  const Vec& final_value() const { return values.back(); }
};

/// Classical RK4 on a fixed step dt, the last step shortened to land exactly on t1.
/// Throws BlowUpError carrying the last finite time if the state becomes non-finite.
Trajectory integrate_fiber(const ReactionField& F, const SpatialPoint& x, const Vec& v0, double t0, double t1,
                           double dt, bool estimate_error = true);

// ---------------------------------------------------------------------------
// ODE-level hypothesis and preservation checks.
// ---------------------------------------------------------------------------

struct HypothesisOptions {
  int space_samples = 256;
  int time_samples = 64;
  SpatialPoint point{};           // representative spatial point x*
  double exclusion_buffer = 0.0;  // samples within this distance of the avoidance set are skipped
  std::optional<std::uint64_t> jitter_seed;  // shifts each sample time forward by up to half a time cell
  kernels::Exec exec = kernels::Exec::parallel;
};

struct HypothesisSample {
  Vec v;
  double t = 0.0;
  std::optional<ConeVerdict> verdict;  // empty iff excluded
  bool excluded_by_avoidance = false;
};

struct HypothesisReport {
  std::vector<HypothesisSample> samples;
  std::vector<double> times;
  int space_samples = 0;
  bool holds_everywhere_tested = true;
  std::vector<std::size_t> failure_locus;  // indices of non_member samples
  std::size_t members = 0;
  std::size_t non_members = 0;
  std::size_t inconclusive = 0;
  std::size_t excluded = 0;
};

/// Tests (F(v, t), 1) against the forward cone of the main family at boundary samples
/// v of J(t) for `time_samples` uniform times t in [t_start, t_end).
HypothesisReport check_ode_hypothesis(const SpaceTimeTrack& track, const ReactionField& F,
                                      const HypothesisOptions& options = {});

struct PreservationOptions {
  int starts = 64;
  double dt = 1e-3;
  SpatialPoint point{};
  double exit_tolerance = 1e-5;
  std::vector<Vec> explicit_starts;  // replaces the sampled starts when non-empty
  kernels::Exec exec = kernels::Exec::parallel;
};

struct StartEvent {
  std::size_t start = 0;
  double time = 0.0;
};

struct PreservationReport {
  double max_excursion = 0.0;
  std::optional<StartEvent> first_exit;             // first time some trajectory leaves K by > exit_tolerance
  std::optional<StartEvent> first_avoidance_entry;  // first time some trajectory enters A
  std::vector<Vec> starts;
  std::vector<double> excursions;  // per start
  std::size_t skipped_in_avoidance = 0;
  double dt = 0.0;
};

class PreservationBlowUp : public BlowUpError {
 public:
  PreservationBlowUp(const BlowUpError& cause, PreservationReport partial)
      : BlowUpError(cause.what(), cause.last_finite_time()), partial_(std::move(partial)) {}
  const PreservationReport& partial() const { return partial_; }

 private:
  PreservationReport partial_;
};

/// Integrates from boundary and interior starts of J(t_start) over the horizon and records the
/// largest distance to J(t) along any trajectory.
PreservationReport check_ode_preservation(const SpaceTimeTrack& track, const ReactionField& F,
                                          const PreservationOptions& options = {});

}  // namespace mplab
