#include "mplab/field.hpp"
#include "mplab/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_shape(const ManifoldGrid& grid, const Section& s, const char* what) {
  if (s.dim < 1 || s.data.size() != grid.nodes() * static_cast<std::size_t>(s.dim)) {
    std::ostringstream msg;
    msg << what << ": section has " << s.data.size() << " values, grid needs " << grid.nodes() << " x " << s.dim;
    throw DomainError(msg.str());
  }
}

Section like(const Section& s) {
  Section out;
  out.dim = s.dim;
  out.time = s.time;
  out.data.assign(s.data.size(), 0.0);
  return out;
}

}  // namespace

ManifoldGrid::ManifoldGrid(Topology topology, int nx, int ny, TimeFn rho)
    : topology_(topology), nx_(nx), ny_(ny), rho_(std::move(rho)) {
  if (nx_ < 8 || (topology_ == Topology::torus && ny_ < 8))
    throw DomainError("grid needs at least 8 nodes per direction");
  if (topology_ == Topology::circle && ny_ != 1) throw DomainError("circle grid has ny = 1");
}

ManifoldGrid ManifoldGrid::circle(int n, TimeFn rho) { return ManifoldGrid(Topology::circle, n, 1, std::move(rho)); }

ManifoldGrid ManifoldGrid::torus(int nx, int ny, TimeFn rho) {
  return ManifoldGrid(Topology::torus, nx, ny, std::move(rho));
}

double ManifoldGrid::hx() const { return kTwoPi / nx_; }

double ManifoldGrid::hy() const { return topology_ == Topology::circle ? hx() : kTwoPi / ny_; }

SpatialPoint ManifoldGrid::point(std::size_t node) const {
  const auto ix = node % static_cast<std::size_t>(nx_);
  const auto iy = node / static_cast<std::size_t>(nx_);
  return {static_cast<double>(ix) * hx(), topology_ == Topology::circle ? 0.0 : static_cast<double>(iy) * hy()};
}

double ManifoldGrid::rho_min(const Horizon& horizon) const {
  rho_.validate_on(horizon.start, horizon.end);
  constexpr int kSamples = 1025;
  double lo = rho_(horizon.end);
  for (int i = 0; i < kSamples - 1; ++i) lo = std::min(lo, rho_(horizon.start + horizon.length() * i / (kSamples - 1)));
  if (!(lo > 0.0)) throw DomainError("metric scale must stay positive over the horizon");
  return lo;
}

bool GradientCoeffs::is_zero() const {
  return std::all_of(u.begin(), u.end(), [](const Expression& e) { return e.is_zero(); });
}

Vec Section::at(std::size_t node) const {
  return Eigen::Map<const Eigen::VectorXd>(data.data() + node * static_cast<std::size_t>(dim), dim);
}

void Section::set(std::size_t node, const Vec& v) {
  std::copy(v.data(), v.data() + dim, data.begin() + static_cast<std::ptrdiff_t>(node * static_cast<std::size_t>(dim)));
}

bool Section::all_finite() const {
  return std::all_of(data.begin(), data.end(), [](double x) { return std::isfinite(x); });
}

double stability_bound(const ManifoldGrid& grid, const Horizon& horizon, bool has_gradient) {
  const double rho = grid.rho_min(horizon);
  const double hmin = std::min(grid.hx(), grid.hy());
  const double bound = 0.5 * rho * rho * hmin * hmin / (2.0 * grid.dims());
  return has_gradient ? 0.8 * bound : bound;
}

void validate(const PdeConfig& c) {
  const int k = c.track.dim();
  if (c.F.dim() != k) throw DomainError("reaction field and family have different fiber dimensions");
  if (static_cast<int>(c.initial.size()) != k) throw DomainError("initial data needs one expression per fiber component");
  if (!c.u.u.empty() && static_cast<int>(c.u.u.size()) != c.grid.dims())
    throw DomainError("gradient coefficients need one expression per grid direction");
  if (c.record_every < 1) throw DomainError("record_every must be at least 1");
  const double bound = stability_bound(c.grid, c.horizon(), !c.u.is_zero());
  if (!(c.dt > 0.0) || c.dt > bound) {
    std::ostringstream msg;
    msg << "dt = " << c.dt << " violates the explicit stability bound dt <= " << bound;
    throw DomainError(msg.str());
  }
  const Section s0 = sample_section(c.grid, c.initial, c.horizon().start);
  if (!s0.all_finite()) throw DomainError("initial section is not finite");
  const ConvexSet k0 = c.track.main().at(c.horizon().start);
  const double tol = kEpsGeo * std::max(1.0, k0.diameter());
  std::optional<ConvexSet> a0;
  if (c.track.avoidance()) a0.emplace(c.track.avoidance()->at(c.horizon().start));
  for (std::size_t n = 0; n < s0.nodes(); ++n) {
    const Vec v = s0.at(n);
    if (k0.distance(v) > tol) {
      std::ostringstream msg;
      msg << "initial section leaves K(t_start) at node " << n;
      throw DomainError(msg.str());
    }
    if (a0 && a0->distance(v) <= tol) {
      std::ostringstream msg;
      msg << "initial section enters the avoidance set at node " << n;
      throw DomainError(msg.str());
    }
  }
}

Section sample_section(const ManifoldGrid& grid, const std::vector<Expression>& components, double t) {
  Section s;
  s.dim = static_cast<int>(components.size());
  if (s.dim < 1 || s.dim > kMaxFiberDim) throw DomainError("section needs 1..4 components");
  s.time = t;
  s.data.resize(grid.nodes() * components.size());
  for (std::size_t n = 0; n < grid.nodes(); ++n) {
    const SpatialPoint p = grid.point(n);
    ExprVars vars;
    vars.x = p.x;
    vars.y = p.y;
    vars.t = t;
    for (std::size_t c = 0; c < components.size(); ++c) s.data[n * components.size() + c] = components[c](vars);
  }
  return s;
}

Section laplacian(const ManifoldGrid& grid, double t, const Section& s, kernels::Exec exec) {
  check_shape(grid, s, "laplacian");
  const double rho = grid.rho()(t);
  const double wx = 1.0 / (rho * rho * grid.hx() * grid.hx());
  const double wy = grid.topology() == Topology::torus ? 1.0 / (rho * rho * grid.hy() * grid.hy()) : 0.0;
  Section out = like(s);
  kernels::laplacian(exec, grid.shape(s.dim), wx, wy, s.data, out.data);
  return out;
}

Section gradient_term(const GradientCoeffs& u, const ManifoldGrid& grid, double t, const Section& s,
                      kernels::Exec exec) {
  check_shape(grid, s, "gradient_term");
  Section out = like(s);
  if (u.u.empty() || u.is_zero()) return out;
  if (static_cast<int>(u.u.size()) != grid.dims())
    throw DomainError("gradient coefficients need one expression per grid direction");
  const std::size_t n = grid.nodes();
  std::vector<double> ux(n, 0.0), uy(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const SpatialPoint p = grid.point(i);
    ExprVars vars;
    vars.x = p.x;
    vars.y = p.y;
    vars.t = t;
    ux[i] = u.u[0](vars);
    if (grid.dims() == 2) uy[i] = u.u[1](vars);
  }
  const double rho = grid.rho()(t);
  const double wx = 1.0 / (2.0 * rho * grid.hx());
  const double wy = grid.dims() == 2 ? 1.0 / (2.0 * rho * grid.hy()) : 0.0;
  kernels::central_gradient(exec, grid.shape(s.dim), ux, uy, wx, wy, s.data, out.data);
  return out;
}

Section pde_rhs(const PdeConfig& c, double t, const Section& s) {
  Section out = laplacian(c.grid, t, s, c.exec);
  if (!c.u.is_zero()) {
    const Section g = gradient_term(c.u, c.grid, t, s, c.exec);
    kernels::axpy(c.exec, 1.0, g.data, out.data, out.data);
  }
  const auto k = static_cast<std::size_t>(s.dim);
  kernels::for_each_index(c.exec, s.nodes(), [&](std::size_t n) {
    const Vec f = c.F(c.grid.point(n), s.at(n), t);
    for (std::size_t i = 0; i < k; ++i) out.data[n * k + i] += f[static_cast<Eigen::Index>(i)];
  });
  out.time = t;
  return out;
}

Section step_pde(const PdeConfig& c, const Section& state) { return step_pde(c, state, c.dt); }

Section step_pde(const PdeConfig& c, const Section& y, double step) {
  check_shape(c.grid, y, "step_pde");
  const double t = y.time;
  Section tmp = like(y);

  const Section k1 = pde_rhs(c, t, y);
  kernels::axpy(c.exec, 0.5 * step, k1.data, y.data, tmp.data);
  const Section k2 = pde_rhs(c, t + 0.5 * step, tmp);
  kernels::axpy(c.exec, 0.5 * step, k2.data, y.data, tmp.data);
  const Section k3 = pde_rhs(c, t + 0.5 * step, tmp);
  kernels::axpy(c.exec, step, k3.data, y.data, tmp.data);
  const Section k4 = pde_rhs(c, t + step, tmp);

  Section next = y;
  kernels::rk4_combine(c.exec, step, k1.data, k2.data, k3.data, k4.data, next.data);
  next.time = t + step;
  if (!next.all_finite()) {
    std::ostringstream msg;
    msg << "PDE state became non-finite after t=" << t;
    throw PdeBlowUp(msg.str(), y);
  }
  return next;
}

StepPlan plan_steps(const Horizon& horizon, double dt, int record_every) {
  if (!(dt > 0.0) || record_every < 1) throw DomainError("step plan needs dt > 0 and record_every >= 1");
  const auto every = static_cast<std::size_t>(record_every);
  auto n = static_cast<std::size_t>(std::ceil(horizon.length() / dt - 1e-9));
  n = std::max<std::size_t>(n, 1);
  n = (n + every - 1) / every * every;
  return {n, horizon.length() / static_cast<double>(n), n / every + 1};
}

Section run_simulation(const PdeConfig& c, const RecordHook& on_record) {
  const StepPlan plan = plan_steps(c.horizon(), c.dt, c.record_every);
  const auto every = static_cast<std::size_t>(c.record_every);
  Section state = sample_section(c.grid, c.initial, c.horizon().start);
  if (on_record) on_record(state);
  for (std::size_t i = 1; i <= plan.steps; ++i) {
    state = step_pde(c, state, plan.dt);
    state.time = i == plan.steps ? c.horizon().end : c.horizon().start + static_cast<double>(i) * plan.dt;
    if (on_record && i % every == 0) on_record(state);
  }
  return state;
}

std::string section_csv(const ManifoldGrid& grid, const Section& s) {
  check_shape(grid, s, "section_csv");
  std::string out = grid.topology() == Topology::circle ? "node" : "ix,iy";
  for (int c = 0; c < s.dim; ++c) out += ",v" + std::to_string(c);
  out += '\n';
  for (std::size_t n = 0; n < s.nodes(); ++n) {
    if (grid.topology() == Topology::circle) {
      out += std::to_string(n);
    } else {
      out += std::to_string(n % static_cast<std::size_t>(grid.nx())) + "," +
             std::to_string(n / static_cast<std::size_t>(grid.nx()));
    }
    for (int c = 0; c < s.dim; ++c) out += "," + format_number(s.data[n * static_cast<std::size_t>(s.dim) + static_cast<std::size_t>(c)]);
    out += '\n';
  }
  return out;
}

}  // namespace mplab
