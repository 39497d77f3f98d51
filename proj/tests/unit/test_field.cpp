#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mplab/field.hpp"
#include "support.hpp"

#include <cmath>
#include <cstring>

using namespace mplab;
using namespace mplab::testing;

namespace {

Section cosine(const ManifoldGrid& g, const char* expr = "cos(x)") {
  return sample_section(g, {Expression(expr)}, 0.0);
}

double max_abs_diff(const Section& s, const std::function<double(double)>& f, const ManifoldGrid& g) {
  double worst = 0.0;
  for (std::size_t n = 0; n < s.nodes(); ++n) worst = std::max(worst, std::abs(s.data[n] - f(g.point(n).x)));
  return worst;
}

SpaceTimeTrack wide_box(int k, Horizon h) {
  TimeVec lo, hi;
  for (int i = 0; i < k; ++i) {
    lo.push_back(TimeFn::constant(-100.0));
    hi.push_back(TimeFn::constant(100.0));
  }
  return SpaceTimeTrack(ConvexFamily(BoxSpec{lo, hi}, h));
}

PdeConfig heat(int n, Horizon h, std::vector<Expression> initial = {Expression("cos(x)")}) {
  const auto grid = ManifoldGrid::circle(n);
  const int k = static_cast<int>(initial.size());
  return PdeConfig{grid,    ReactionField(ZeroReaction{}, k), {}, wide_box(k, h), std::move(initial),
                   stability_bound(grid, h, false), 10,       kernels::Exec::parallel};
}

bool same_bits(const Section& a, const Section& b) {
  return a.data.size() == b.data.size() &&
         std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto g = ManifoldGrid::torus(16, 8);
  CHECK(g.nodes() == 128);
  CHECK(g.dims() == 2);
  CHECK(g.point(17).x == doctest::Approx(g.hx()));
  CHECK(g.point(17).y == doctest::Approx(g.hy()));
  CHECK_THROWS_AS(ManifoldGrid::circle(4), DomainError);
  CHECK_THROWS_AS(ManifoldGrid::circle(16, TimeFn::linear(1.0, -2.0)).rho_min({0.0, 1.0}), DomainError);
}

TEST_CASE("laplacian examples") {
  const auto g = ManifoldGrid::circle(256);
  const Section c = sample_section(g, {Expression("3"), Expression("-1")}, 0.0);
  for (double x : laplacian(g, 0.0, c).data) CHECK(x == 0.0);

  CHECK(max_abs_diff(laplacian(g, 0.0, cosine(g)), [](double x) { return -std::cos(x); }, g) <= 1e-3);

  const auto g2 = ManifoldGrid::circle(256, TimeFn::constant(2.0));
  CHECK(max_abs_diff(laplacian(g2, 0.0, cosine(g2)), [](double x) { return -std::cos(x) / 4; }, g2) <= 2.5e-4);

  Section wrong = cosine(ManifoldGrid::circle(128));
  CHECK_THROWS_AS(laplacian(g, 0.0, wrong), DomainError);
}

TEST_CASE("laplacian on the torus") {
  const auto g = ManifoldGrid::torus(128, 128);
  const Section s = sample_section(g, {Expression("cos(x)*sin(2*y)")}, 0.0);
  const Section l = laplacian(g, 0.0, s);
  double worst = 0.0;
  for (std::size_t n = 0; n < s.nodes(); ++n) worst = std::max(worst, std::abs(l.data[n] + 5.0 * s.data[n]));
  CHECK(worst <= 5e-3);
}

TEST_CASE("gradient term examples") {
  const auto g = ManifoldGrid::circle(256);
  const Section s = cosine(g, "sin(x)");
  for (double x : gradient_term({}, g, 0.0, s).data) CHECK(x == 0.0);
  for (double x : gradient_term({{Expression("0")}}, g, 0.0, s).data) CHECK(x == 0.0);

  CHECK(max_abs_diff(gradient_term({{Expression("1")}}, g, 0.0, s), [](double x) { return std::cos(x); }, g) <= 1e-3);

  const Section two = gradient_term({{Expression("t")}}, g, 2.0, s);
  CHECK(max_abs_diff(two, [](double x) { return 2.0 * std::cos(x); }, g) <= 2e-3);
  const std::size_t n = s.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const double direct = 2.0 * (s.data[(i + 1) % n] - s.data[(i + n - 1) % n]) / (2.0 * g.hx());
    CHECK(two.data[i] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gradient term vanishes exactly on constant sections") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto g = i % 2 ? ManifoldGrid::torus(12, 9, TimeFn::constant(1.3)) : ManifoldGrid::circle(33);
    const double c = uniform(rng, -5.0, 5.0);
    const Section s = sample_section(g, {Expression(std::to_string(c))}, 0.0);
    GradientCoeffs u;
    for (int d = 0; d < g.dims(); ++d) u.u.push_back(Expression("sin(x) + 3*y - t"));
    for (double x : gradient_term(u, g, 0.7, s).data) CHECK(x == 0.0);
  }
}

TEST_CASE("discrete maximum-principle sign") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    const auto g = trial % 2 ? ManifoldGrid::torus(8 + trial % 5, 10, TimeFn::constant(uniform(rng, 0.5, 2.0)))
                             : ManifoldGrid::circle(8 + trial, TimeFn::constant(uniform(rng, 0.5, 2.0)));
    Section s;
    s.dim = k;
    s.data.resize(g.nodes() * static_cast<std::size_t>(k));
    for (auto& x : s.data) x = uniform(rng, -3.0, 3.0);
    const Vec n = unit(rng, k);
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.nodes(); ++i)
      if (n.dot(s.at(i)) > n.dot(s.at(best))) best = i;
    CHECK(n.dot(laplacian(g, 0.0, s).at(best)) <= 1e-12);
  }
}

TEST_CASE("step_pde examples") {
  const PdeConfig still = heat(64, {0.0, 1.0}, {Expression("0.25")});
  Section s = sample_section(still.grid, still.initial, 0.0);
  for (int i = 0; i < 50; ++i) s = step_pde(still, s);
  for (double x : s.data) CHECK(x == 0.25);

  const PdeConfig h = heat(256, {0.0, 1.0});
  const Section end = run_simulation(h, {});
  CHECK(end.time == 1.0);
  CHECK(max_abs_diff(end, [](double x) { return std::exp(-1.0) * std::cos(x); }, h.grid) <= 1e-3);

  const auto grid = ManifoldGrid::circle(64);
  const Horizon hz{0.0, 0.9};
  const PdeConfig sq{grid, ReactionField(SquareReaction{}, 1), {}, wide_box(1, hz), {Expression("0.5")},
                     stability_bound(grid, hz, false), 10, kernels::Exec::parallel};
  const Section r = run_simulation(sq, {});
  for (double x : r.data) {
    CHECK(x == r.data[0]);
    CHECK(x == doctest::Approx(0.5 / (1.0 - 0.45)).epsilon(1e-5));
  }
}

TEST_CASE("spatially constant runs reduce to the fiber ODE") {
  const auto grid = ManifoldGrid::circle(32);
  const Horizon hz{0.0, 1.0};
  const ReactionField rot(RotationReaction{1.0}, 2);
  const PdeConfig c{grid, rot, {}, wide_box(2, hz), {Expression("0.3"), Expression("-0.6")},
                    stability_bound(grid, hz, false), 7, kernels::Exec::parallel};
  const Section end = run_simulation(c, {});
  const StepPlan plan = plan_steps(hz, c.dt, c.record_every);
  const auto traj = integrate_fiber(rot, {}, vec({0.3, -0.6}), 0.0, 1.0, plan.dt, false);
  REQUIRE(traj.times.size() == plan.steps + 1);
  for (std::size_t n = 0; n < end.nodes(); ++n) CHECK((end.at(n) - traj.final_value()).norm() <= 1e-8);
}

TEST_CASE("grid refinement is second order") {
  auto error = [](int n) {
    const PdeConfig c = heat(n, {0.0, 0.5});
    const Section end = run_simulation(c, {});
    return max_abs_diff(end, [](double x) { return std::exp(-0.5) * std::cos(x); }, c.grid);
  };
  const double ratio = error(32) / error(64);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("rotating node labels commutes with step_pde") {
  const auto grid = ManifoldGrid::circle(40, TimeFn::sinusoid(1.0, 0.5, 1.0));
  const Horizon hz{0.0, 1.0};
  const PdeConfig c{grid, ReactionField(RotationReaction{1.0}, 2), {{Expression("0.1")}}, wide_box(2, hz),
                    {Expression("cos(x)"), Expression("sin(3*x)")}, stability_bound(grid, hz, true), 10,
                    kernels::Exec::parallel};
  const Section s = sample_section(grid, c.initial, 0.0);
  const std::size_t shift = 7, n = s.nodes();
  auto rotate = [&](const Section& in) {
    Section out = in;
    for (std::size_t i = 0; i < n; ++i) out.set((i + shift) % n, in.at(i));
    return out;
  };
  CHECK(same_bits(step_pde(c, rotate(s)), rotate(step_pde(c, s))));
}

TEST_CASE("serial and parallel steps agree bitwise") {
  const auto grid = ManifoldGrid::torus(24, 16, TimeFn::sinusoid(1.0, 0.5, 1.0));
  const Horizon hz{0.0, 1.0};
  PdeConfig c{grid, ReactionField(ExpressionReaction{{Expression("v0*v1 - x"), Expression("sin(v0) + y*t")}}, 2),
              {{Expression("0.1"), Expression("cos(x)")}}, wide_box(2, hz),
              {Expression("cos(x)*sin(y)"), Expression("0.5")}, stability_bound(grid, hz, true), 10,
              kernels::Exec::serial};
  Section a = sample_section(grid, c.initial, 0.0), b = a;
  PdeConfig p = c;
  p.exec = kernels::Exec::parallel;
  for (int i = 0; i < 20; ++i) {
    a = step_pde(c, a);
    b = step_pde(p, b);
  }
  CHECK(same_bits(a, b));
}

TEST_CASE("run_simulation records land on a uniform grid ending at t_end") {
  const PdeConfig c = heat(16, {0.0, 0.3});
  std::vector<double> times;
  run_simulation(c, [&](const Section& s) { times.push_back(s.time); });
  const StepPlan plan = plan_steps(c.horizon(), c.dt, c.record_every);
  REQUIRE(times.size() == plan.records);
  CHECK(plan.dt <= c.dt);
  CHECK(plan.steps % 10 == 0);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == 0.3);
  for (std::size_t j = 1; j + 1 < times.size(); ++j)
    CHECK(times[j] - times[j - 1] == doctest::Approx(10 * plan.dt).epsilon(1e-9));
}

TEST_CASE("blow-up keeps the last finite state") {
  const auto grid = ManifoldGrid::circle(8);
  const Horizon hz{0.0, 3.0};
  const PdeConfig c{grid, ReactionField(SquareReaction{}, 1), {}, wide_box(1, hz), {Expression("2")},
                    stability_bound(grid, hz, false), 1, kernels::Exec::parallel};
  try {
    run_simulation(c, {});
    FAIL("expected a blow-up");
  } catch (const PdeBlowUp& e) {
    CHECK(e.last_finite().all_finite());
    CHECK(e.last_finite_time() > 0.4);
  }
}

TEST_CASE("validation rejects bad configurations") {
  PdeConfig c = heat(64, {0.0, 1.0});
  CHECK_NOTHROW(validate(c));
  c.dt *= 1.01;
  CHECK_THROWS_AS(validate(c), DomainError);
  c = heat(64, {0.0, 1.0}, {Expression("200")});
  CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("section CSV") {
  const auto g = ManifoldGrid::torus(8, 8);
  const Section s = sample_section(g, {Expression("0.5"), Expression("x")}, 0.0);
  const std::string csv = section_csv(g, s);
  CHECK(csv.rfind("ix,iy,v0,v1\n0,0,0.5,0\n1,0,0.5,0.7853981633974483\n", 0) == 0);
  const auto c = ManifoldGrid::circle(8);
  CHECK(section_csv(c, sample_section(c, {Expression("1")}, 0.0)).rfind("node,v0\n0,1\n", 0) == 0);
}
