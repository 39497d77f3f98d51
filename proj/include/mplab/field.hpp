#pragma once

#include "mplab/dynamics.hpp"
#include "mplab/expression.hpp"
#include "mplab/geometry.hpp"
#include "mplab/kernels.hpp"
#include "mplab/time_fn.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mplab {

enum class Topology { circle, torus };

/// Uniform periodic grid on S^1 or T^2 (period 2 pi per direction) with metric rho(t)^2 * flat.
class ManifoldGrid {
 public:
  static ManifoldGrid circle(int n, TimeFn rho = TimeFn::constant(1.0));
  static ManifoldGrid torus(int nx, int ny, TimeFn rho = TimeFn::constant(1.0));

  Topology topology() const { return topology_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int dims() const { return topology_ == Topology::circle ? 1 : 2; }
  std::size_t nodes() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  double hx() const;
  double hy() const;
  /// Largest node spacing.
  double h() const { return std::max(hx(), hy()); }
  const TimeFn& rho() const { return rho_; }

  SpatialPoint point(std::size_t node) const;
  kernels::GridShape shape(int k) const { return {nx_, ny_, k}; }

  /// min rho over the horizon (validated positive and finite).
  double rho_min(const Horizon& horizon) const;

  bool operator==(const ManifoldGrid&) const = default;

 private:
  ManifoldGrid(Topology topology, int nx, int ny, TimeFn rho);

  Topology topology_;
  int nx_;
  int ny_;
  TimeFn rho_;
};

/// u^i(x, t), one expression per grid direction; empty means u = 0.
struct GradientCoeffs {
  std::vector<Expression> u;

  bool is_zero() const;
  bool operator==(const GradientCoeffs&) const = default;
};

/// One fiber vector per node, node-major.
struct Section {
  int dim = 1;
  std::vector<double> data;
  double time = 0.0;

  std::size_t nodes() const { return data.size() / static_cast<std::size_t>(dim); }
  Vec at(std::size_t node) const;
  void set(std::size_t node, const Vec& v);
  bool all_finite() const;
};

struct PdeConfig {
  ManifoldGrid grid;
  ReactionField F;
  GradientCoeffs u;
  SpaceTimeTrack track;
  std::vector<Expression> initial;
  double dt = 0.0;
  int record_every = 10;
  kernels::Exec exec = kernels::Exec::parallel;

  const Horizon& horizon() const { return track.horizon(); }
};

/// 0.5 rho_min^2 h^2 / (2 dims), times 0.8 when the gradient term is present.
double stability_bound(const ManifoldGrid& grid, const Horizon& horizon, bool has_gradient);

/// Throws DomainError when the grid, dimensions, step or initial data are inconsistent.
void validate(const PdeConfig& config);

Section sample_section(const ManifoldGrid& grid, const std::vector<Expression>& components, double t);

Section laplacian(const ManifoldGrid& grid, double t, const Section& s,
                  kernels::Exec exec = kernels::Exec::parallel);
Section gradient_term(const GradientCoeffs& u, const ManifoldGrid& grid, double t, const Section& s,
                      kernels::Exec exec = kernels::Exec::parallel);

/// Full semi-discrete right-hand side: laplacian + gradient term + F per node.
Section pde_rhs(const PdeConfig& config, double t, const Section& s);

/// One RK4 step of size `step` (config.dt when omitted).
Section step_pde(const PdeConfig& config, const Section& state);
Section step_pde(const PdeConfig& config, const Section& state, double step);

class PdeBlowUp : public BlowUpError {
 public:
  PdeBlowUp(const std::string& what, Section last_finite)
      : BlowUpError(what, last_finite.time), last_(std::move(last_finite)) {}
  const Section& last_finite() const { return last_; }

 private:
  Section last_;
};

/// Uniform step H / n with n >= H / dt a multiple of record_every, so records land on t_end.
struct StepPlan {
  std::size_t steps = 0;
  double dt = 0.0;
  std::size_t records = 0;
};
StepPlan plan_steps(const Horizon& horizon, double dt, int record_every);

using RecordHook = std::function<void(const Section&)>;

/// Advances from t_start to t_end, calling `on_record` on the initial state and every
/// record_every steps. Returns the final state.
Section run_simulation(const PdeConfig& config, const RecordHook& on_record);

/// CSV with columns node (or ix, iy) and v0..v{k-1}.
std::string section_csv(const ManifoldGrid& grid, const Section& s);

}  // namespace mplab
