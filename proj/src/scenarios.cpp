#include "mplab/scenarios.hpp"

#include <numbers>

namespace mplab {

namespace {

TimeFn c(double v) { return TimeFn::constant(v); }

RunConfig base(const std::string& name, const std::string& description, int n) {
  RunConfig r;
  r.name = name;
  r.description = description;
  r.grid.topology = Topology::circle;
  r.grid.nx = n;
  r.grid.ny = 1;
  r.grid.metric_scale = c(1.0);
  r.record_every = 10;
  return r;
}

// Largest step the stability bound admits.
void set_max_dt(RunConfig& r) {
  r.dt = stability_bound(build_grid(r), r.horizon, !GradientCoeffs{r.gradient}.is_zero());
}

void expect_all(RunConfig& r) { r.expected = {true, true, true, true}; }

Scenario s1() {
  RunConfig r = base("S1", "static box [-1, 1] under pure heat flow", 256);
  r.fiber_dim = 1;
  r.reaction = ZeroReaction{};
  r.family.set = BoxSpec{{c(-1.0)}, {c(1.0)}};
  r.horizon = {0.0, 1.0};
  r.initial = {Expression("0.9*cos(x)")};
  r.tolerances.tol_contain = 1e-8;
  set_max_dt(r);
  expect_all(r);
  return {"S1", "containment in a static convex set (heat flow)", r};
}

Scenario s2() {
  RunConfig r = base("S2", "box [-10, 1/(1-t)] preserved by r' = r^2 up to t = 0.9", 256);
  r.fiber_dim = 1;
  r.reaction = SquareReaction{};
  r.family.set = BoxSpec{{c(-10.0)}, {TimeFn::reciprocal(1.0, 1.0, 0.0)}};
  r.horizon = {0.0, 0.9};
  r.initial = {Expression("0.5+0.3*cos(x)")};
  r.checks.preservation_dt = 1e-4;
  set_max_dt(r);
  expect_all(r);
  return {"S2", "containment in a family with a blow-up bound", r};
}

Scenario s3() {
  RunConfig r = base("S3", "ellipsoid diag(1, 4) rotating with the rotation field", 256);
  r.fiber_dim = 2;
  r.reaction = RotationReaction{1.0};
  const double quarter = std::numbers::pi / 2.0;
  // R(t) diag(1, 4) R(t)^T
  r.family.set = EllipsoidSpec{{c(0.0), c(0.0)},
                               {{TimeFn::sinusoid(2.5, -1.5, 2.0, quarter), TimeFn::sinusoid(0.0, -1.5, 2.0, 0.0)},
                                {TimeFn::sinusoid(0.0, -1.5, 2.0, 0.0), TimeFn::sinusoid(2.5, 1.5, 2.0, quarter)}}};
  r.horizon = {0.0, 1.0};
  r.initial = {Expression("0.8*cos(x)"), Expression("0.32*sin(x)")};
  set_max_dt(r);
  expect_all(r);
  return {"S3", "containment in a rotating ellipsoid", r};
}

Scenario s4() {
  RunConfig r = base("S4", "unit ball with an avoidance cap where the reaction pushes outward", 256);
  r.fiber_dim = 2;
  r.reaction = RadialBumpReaction{1.0, {1.0, 0.0}, 0.8, 0.1};
  r.family.set = BallSpec{{c(0.0), c(0.0)}, c(1.0)};
  r.family.avoidance = CapSpec{{c(0.0), c(0.0)}, c(1.0), {c(1.0), c(0.0)}, c(0.8)};
  r.horizon = {0.0, 1.0};
  r.initial = {Expression("0.8*cos(pi+0.5*pi*cos(x))"), Expression("0.8*sin(pi+0.5*pi*cos(x))")};
  r.tolerances.epsilon_avoid = 0.1;
  set_max_dt(r);
  expect_all(r);
  return {"S4", "containment off an avoidance set", r};
}

Scenario s5() {
  RunConfig r = base("S5", "constant outward push at the upper end of [-1, 1]", 128);
  r.fiber_dim = 1;
  r.reaction = ExpressionReaction{{Expression("1")}};
  r.family.set = BoxSpec{{c(-1.0)}, {c(1.0)}};
  r.horizon = {0.0, 0.1};
  r.initial = {Expression("1")};
  set_max_dt(r);
  r.expected = {false, false, true, false};
  return {"S5", "necessity of the cone condition (constructed failure)", r};
}

Scenario s6() {
  RunConfig r = base("S6", "as S1 with metric scale 1 + 0.5 sin t and transport u = 0.1", 256);
  r.grid.metric_scale = TimeFn::sinusoid(1.0, 0.5, 1.0, 0.0);
  r.fiber_dim = 1;
  r.reaction = ZeroReaction{};
  r.gradient = {Expression("0.1")};
  r.family.set = BoxSpec{{c(-1.0)}, {c(1.0)}};
  r.horizon = {0.0, 1.0};
  r.initial = {Expression("0.9*cos(x)")};
  set_max_dt(r);
  expect_all(r);
  return {"S6", "containment under a time-dependent metric with a gradient term", r};
}

}  // namespace

std::vector<Scenario> catalog() { return {s1(), s2(), s3(), s4(), s5(), s6()}; }

std::optional<Scenario> find_scenario(const std::string& name) {
  for (auto& s : catalog())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace mplab
