#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mplab/monitor.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace mplab;
using namespace mplab::testing;

namespace {

SpaceTimeTrack unit_box(int k, Horizon h = {0.0, 1.0}) {
  TimeVec lo, hi;
  for (int i = 0; i < k; ++i) {
    lo.push_back(TimeFn::constant(-1.0));
    hi.push_back(TimeFn::constant(1.0));
  }
  return SpaceTimeTrack(ConvexFamily(BoxSpec{lo, hi}, h));
}

std::vector<double> ramp(std::size_t n, double dt, double slope) {
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = slope * static_cast<double>(j) * dt;
  return f;
}

}  // namespace

TEST_CASE("sup distance examples") {
  const auto g = ManifoldGrid::circle(64);
  const Section s = sample_section(g, {Expression("1+0.5*cos(x)"), Expression("0")}, 0.0);
  const auto [f, node] = sup_distance(s, unit_box(2), 0.0);
  CHECK(f == doctest::Approx(0.5));
  CHECK(node == 0);

  const Section inside = sample_section(g, {Expression("0.5*sin(x)"), Expression("0.2")}, 0.0);
  CHECK(sup_distance(inside, unit_box(2), 0.0).first == 0.0);

  const Section wrong = sample_section(g, {Expression("0")}, 0.0);
  CHECK_THROWS_AS(sup_distance(wrong, unit_box(2), 0.0), DomainError);
}

TEST_CASE("avoidance margin") {
  const auto g = ManifoldGrid::circle(32);
  const Horizon h{0.0, 1.0};
  const SpaceTimeTrack track(ConvexFamily(BallSpec{consts({0.0, 0.0}), TimeFn::constant(5.0)}, h),
                             ConvexFamily(BallSpec{consts({3.0, 0.0}), TimeFn::constant(0.7)}, h));
  const Section s = sample_section(g, {Expression("1"), Expression("0")}, 0.0);
  CHECK(avoidance_margin(s, track, 0.0) == doctest::Approx(1.3));
  CHECK_THROWS_AS(avoidance_margin(s, unit_box(2), 0.0), DomainError);
}

TEST_CASE("dini forward examples") {
  const std::vector<double> lin = ramp(20, 0.1, 2.0);
  CHECK(dini_forward(lin, 0.1, 3) == doctest::Approx(2.0));

  // A later rise inside the window dominates.
  const std::vector<double> kink{0.0, 0.0, 0.0, 1.0, 1.0};
  CHECK(dini_forward(kink, 1.0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(dini_forward(kink, 1.0, 0, 1) == doctest::Approx(0.0));
  CHECK(dini_forward(kink, 1.0, 3) == doctest::Approx(0.0));

  CHECK_THROWS_AS(dini_forward(kink, 1.0, 4), DomainError);
  CHECK_THROWS_AS(dini_forward(kink, 1.0, 0, 0), DomainError);
}

TEST_CASE("gronwall examples") {
  const double dt = 1e-3;
  std::vector<double> zero(200, 0.0);
  CHECK(check_gronwall(zero, dt, 0.0, true));

  CHECK_FALSE(check_gronwall(ramp(200, dt, 1.0), dt, 0.0, true));

  std::vector<double> growth(200);
  for (std::size_t j = 0; j < growth.size(); ++j) growth[j] = 0.1 * std::exp(2.0 * static_cast<double>(j) * dt);
  CHECK(check_gronwall(growth, dt, 2.0, false));
  CHECK_FALSE(check_gronwall(growth, dt, 0.5, false));

  // Negative values are skipped.
  std::vector<double> below(50, -1.0);
  below.back() = 0.0;
  CHECK(check_gronwall(below, dt, 0.0, false));
}

TEST_CASE("dini of sup on a moving parabola") {
  // g(s, t) = s t - s^2 peaks at s = t / 2 with value t^2 / 4.
  std::vector<double> S;
  for (int i = 0; i <= 400; ++i) S.push_back(i / 400.0);
  auto g = [](double s, double t) { return s * t - s * s; };
  auto dg = [](double s, double) { return s; };
  const double dt = 1e-3;
  const auto samples = dini_of_sup(S, g, dg, 0.2, dt, 200, 1);
  REQUIRE(samples.size() == 199);
  for (const auto& x : samples) {
    CHECK(x.f == doctest::Approx(x.t * x.t / 4).epsilon(1e-3));
    CHECK(x.dini <= x.argmax_rate + 10 * dt);
    CHECK(x.dini == doctest::Approx(x.t / 2).epsilon(0.02));
  }
  const auto central = dini_of_sup(S, g, {}, 0.2, dt, 50);
  for (std::size_t j = 0; j < central.size(); ++j) CHECK(central[j].argmax_rate == doctest::Approx(samples[j].argmax_rate));

  CHECK_THROWS_AS(dini_of_sup({}, g, dg, 0.0, dt, 5), DomainError);
  CHECK_THROWS_AS(dini_of_sup(S, g, dg, 0.0, dt, 1), DomainError);
}

TEST_CASE("semicontinuity probe") {
  const double dt = 1e-2;
  std::vector<double> smooth(100);
  for (std::size_t j = 0; j < smooth.size(); ++j) smooth[j] = std::sin(static_cast<double>(j) * dt);
  CHECK(semicontinuity_probe(smooth, dt).empty());

  std::vector<double> spike(100, 0.0);
  spike[50] = 5.0;
  const auto rep = semicontinuity_probe(spike, dt);
  CHECK(rep.right_flags == std::vector<std::size_t>{50});
  CHECK(rep.left_flags == std::vector<std::size_t>{51});

  std::vector<double> drop(100, 1.0);
  for (std::size_t j = 60; j < drop.size(); ++j) drop[j] = 0.0;
  const auto d = semicontinuity_probe(drop, dt);
  CHECK(d.right_flags == std::vector<std::size_t>{59});
  CHECK(d.left_flags == std::vector<std::size_t>{60});
  CHECK(d.jump_tol == doctest::Approx(2e-9));
}

TEST_CASE("theorem verdict") {
  HypothesisReport hyp;
  hyp.members = 10;
  MonitorSeries s;
  s.dt = 1e-3;
  s.f.assign(50, 0.0);
  s.times = ramp(50, s.dt, 1.0);
  s.argmax.assign(50, 0);

  auto v = theorem_verdict(hyp, s, 1e-6, 0.0, 1.0);
  CHECK(v.hypothesis_ok);
  CHECK(v.containment_ok);
  CHECK(v.avoidance_ok);
  CHECK(v.gronwall_ok);
  CHECK_FALSE(v.min_margin);

  s.margins.assign(50, 0.5);
  s.margins[7] = 0.1;
  hyp.holds_everywhere_tested = false;
  s.f[20] = 1e-3;
  v = theorem_verdict(hyp, s, 1e-6, 0.3, 1.0);
  CHECK_FALSE(v.hypothesis_ok);
  CHECK_FALSE(v.containment_ok);
  CHECK_FALSE(v.avoidance_ok);
  CHECK(*v.min_margin == 0.1);
  CHECK(v.max_f == 1e-3);
  CHECK(v.details.find("min margin") != std::string::npos);

  CHECK_THROWS_AS(theorem_verdict(hyp, MonitorSeries{}, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("monitored heat run tracks exponential decay") {
  // f(t) = 0.5 e^{-t} for the continuous problem.
  const Horizon h{0.0, 0.5};
  const auto grid = ManifoldGrid::circle(32);
  auto err = [&](double dt) {
    PdeConfig c{grid, ReactionField(ZeroReaction{}, 1), {}, unit_box(1, h), {Expression("1+0.5*cos(x)")}, dt, 1,
                kernels::Exec::parallel};
    const MonitoredRun run = run_monitored(c, 1.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < run.series.size(); ++j) {
      const double t = run.series.times[j];
      worst = std::max(worst, std::abs(run.series.f[j] - 0.5 * std::exp(-t)));
    }
    return worst;
  };
  const double bound = stability_bound(grid, h, false);
  const double e1 = err(bound);
  const double e2 = err(bound / 2);
  CHECK(e1 < 5e-3);
  CHECK(e2 <= e1 * 1.01);
}

TEST_CASE("monitored run flags excursions and writes csv") {
  const Horizon h{0.0, 0.1};
  const auto grid = ManifoldGrid::circle(16);
  PdeConfig c{grid, ReactionField(ZeroReaction{}, 1), {}, unit_box(1, h), {Expression("1.5")}, 1e-3, 10,
              kernels::Exec::serial};
  const MonitoredRun run = run_monitored(c, 0.1);
  REQUIRE(run.series.size() == 11);
  CHECK(run.series.times.back() == 0.1);
  CHECK(run.series.f.front() == doctest::Approx(0.5));
  CHECK(run.series.flags.front() == "excursion");
  CHECK(std::isnan(run.series.dini.back()));
  CHECK(run.series.dini.front() == doctest::Approx(0.0).epsilon(1e-12));

  const std::string csv = monitor_csv(run.series);
  CHECK(csv.rfind("t,f,argmax_node,margin,dini,flags\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv.find(",,excursion\n") != std::string::npos);
}

TEST_CASE("dini forward converges at first order on a smooth series") {
  auto err = [](double dt) {
    std::vector<double> f(static_cast<std::size_t>(std::lround(2.0 / dt)) + 1);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sin(static_cast<double>(j) * dt);
    double worst = 0.0;
    for (std::size_t j = 0; static_cast<double>(j) * dt <= 1.0; ++j)
      worst = std::max(worst, std::abs(dini_forward(f, dt, j) - std::cos(static_cast<double>(j) * dt)));
    return worst;
  };
  const double ratio = err(2e-3) / err(1e-3);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("dini of sup degenerate cases") {
  const std::vector<double> S{0.0, 0.5, 1.0};
  for (const auto& x : dini_of_sup(S, [](double s, double) { return s * s; }, {}, 0.0, 1e-3, 20)) {
    CHECK(x.dini == 0.0);
    CHECK(x.argmax_rate == 0.0);
  }
  auto g = [](double s, double t) { return s + t * t; };
  const auto one = dini_of_sup({0.3}, g, {}, 0.0, 0.1, 5, 1);
  for (std::size_t j = 0; j < one.size(); ++j)
    CHECK(one[j].dini == doctest::Approx((g(0.3, 0.1 * (j + 1)) - g(0.3, 0.1 * j)) / 0.1));

  const std::vector<double> abs_t{0.0, 1e-3, 2e-3, 3e-3};
  CHECK(dini_forward(abs_t, 1e-3, 0) == doctest::Approx(1.0).epsilon(1e-9));
}
