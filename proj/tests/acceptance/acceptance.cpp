#include "mplab/runner.hpp"
#include "mplab/scenarios.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

using namespace mplab;
using namespace mplab::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Timed {
  VerifyResult result;
  double seconds = 0.0;
};

Timed verify(const std::string& name, const RunOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  Timed t{run_verify(find_scenario(name)->config, opts), 0.0};
  t.seconds = seconds_since(start);
  return t;
}

std::map<std::string, Timed>& runs() {
  static std::map<std::string, Timed> cache;
  return cache;
}

const Timed& cached(const std::string& name) {
  auto& c = runs();
  if (!c.count(name)) c.emplace(name, verify(name));
  return c.at(name);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome containment() {
  Outcome o{true, ""};
  for (const char* name : {"S1", "S2", "S3", "S6"}) {
    const Timed& t = cached(name);
    const bool ok = t.result.verdict.containment_ok && t.result.verdict.max_f <= t.result.tol_contain &&
                    t.seconds <= 10.0;
    o.pass = o.pass && ok;
    o.detail += std::string(name) + " max_f=" + fmt(t.result.verdict.max_f) + " (" + fmt(t.seconds) + "s) ";
  }
  o.pass = o.pass && cached("S1").result.verdict.max_f <= 1e-8;
  return o;
}

Outcome avoidance() {
  const Timed& t = cached("S4");
  const RunConfig c = find_scenario("S4")->config;
  const SpaceTimeTrack track = build_track(c);
  const ReactionField F = build_reaction(c);

  HypothesisOptions bare = hypothesis_options(c, kernels::Exec::parallel);
  const auto report = check_ode_hypothesis(SpaceTimeTrack(track.main()), F, bare);
  bool locus_in_cap = !report.failure_locus.empty();
  for (auto i : report.failure_locus) {
    const auto& s = report.samples[i];
    locus_in_cap = locus_in_cap && track.avoidance()->at(s.t).distance(s.v) <= kEpsGeo;
  }
  const auto& v = t.result.verdict;
  const bool ok = v.hypothesis_ok && locus_in_cap && v.containment_ok && v.min_margin && *v.min_margin >= 0.3 &&
                  t.seconds <= 15.0;
  return {ok, "failures without exclusion=" + std::to_string(report.failure_locus.size()) +
                  " min_margin=" + fmt(v.min_margin.value_or(-1.0)) + " (" + fmt(t.seconds) + "s)"};
}

Outcome violation() {
  const Timed& t = cached("S5");
  const auto& hyp = t.result.ode.hypothesis;
  std::map<double, bool> upper_fails;
  for (double time : hyp.times) upper_fails[time] = false;
  bool only_upper = true;
  for (auto i : hyp.failure_locus) {
    const auto& s = hyp.samples[i];
    if (s.v[0] == 1.0) {
      upper_fails[s.t] = true;
    } else {
      only_upper = false;
    }
  }
  bool every_time = !upper_fails.empty();
  for (const auto& [time, hit] : upper_fails) every_time = every_time && hit;
  const double f_end = t.result.run.series.f.back();
  const bool ok = !hyp.holds_everywhere_tested && every_time && only_upper && std::abs(f_end - 0.1) <= 1e-4 &&
                  t.seconds <= 5.0;
  return {ok, "f(0.1)=" + fmt(f_end) + " non_members=" + std::to_string(hyp.non_members) + " (" + fmt(t.seconds) +
                  "s)"};
}

Outcome cone_oracles() {
  std::mt19937_64 rng(14);
  int static_agree = 0;
  for (int i = 0; i < 200; ++i) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const bool box = i % 2 == 0;
    const ConvexSetSpec spec = box ? ConvexSetSpec(random_box(rng, k)) : ConvexSetSpec(random_polytope(rng, k));
    const ConvexFamily fam(spec, {0.0, 1.0});
    const ConvexSet set = fam.at(0.0);
    const Vec v = set.project(set.reference_point() + 3.0 * set.diameter() * unit(rng, k));
    const Vec F = gaussian(rng, k);
    std::vector<Vec> normals;
    std::vector<double> offsets;
    if (box) {
      const auto& b = std::get<BoxSpec>(spec);
      for (int j = 0; j < k; ++j) {
        normals.push_back(Vec::Unit(k, j));
        offsets.push_back(b.upper[static_cast<std::size_t>(j)](0.0));
        normals.push_back(-Vec::Unit(k, j));
        offsets.push_back(-b.lower[static_cast<std::size_t>(j)](0.0));
      }
    } else {
      for (const auto& c : std::get<PolytopeSpec>(spec).constraints) {
        Vec n(k);
        for (int j = 0; j < k; ++j) n[j] = c.normal[static_cast<std::size_t>(j)](0.0);
        normals.push_back(n / n.norm());
        offsets.push_back(c.offset(0.0) / n.norm());
      }
    }
    bool oracle = true;
    for (std::size_t a = 0; a < normals.size(); ++a)
      if (std::abs(normals[a].dot(v) - offsets[a]) <= set.active_tolerance() &&
          normals[a].dot(F) > 1e-9 * (F.norm() + 1.0))
        oracle = false;
    static_agree += cone_member_static(fam, 0.0, v, F) == oracle;
  }

  int decisive = 0, spacetime_agree = 0;
  for (int i = 0; decisive < 100; ++i) {
    const int k = 2 + i % 2;
    ConvexSetSpec spec;
    if (i % 3 == 0) {
      spec = random_box(rng, k);
    } else if (i % 3 == 1) {
      spec = random_polytope(rng, k);
    } else {
      spec = random_ball(rng, k);
    }
    const SpaceTimeTrack track(ConvexFamily(spec, {0.0, 1.0}));
    const ConvexSet set = track.main().at(0.0);
    const Vec v = set.project(set.reference_point() + 3.0 * set.diameter() * unit(rng, k));
    const Vec W = gaussian(rng, k);
    double margin = -1e300;
    for (const auto& n : set.outward_normals(v)) margin = std::max(margin, n.dot(W));
    if (std::abs(margin) < 1e-3) continue;
    ++decisive;
    const double t = uniform(rng, 0.0, 0.9);
    const auto verdict = cone_member_spacetime(track, v, t, W);
    spacetime_agree += (verdict.value == ConeVerdict::Value::member) == cone_member_static(track.main(), t, v, W) &&
                       verdict.value != ConeVerdict::Value::inconclusive;
  }
  return {static_agree == 200 && spacetime_agree == 100,
          "static " + std::to_string(static_agree) + "/200, space-time " + std::to_string(spacetime_agree) + "/100"};
}

Outcome rk4() {
  const ReactionField sq(SquareReaction{}, 1);
  auto err = [&](double dt) {
    return std::abs(integrate_fiber(sq, {}, vec({1.0}), 0.0, 0.9, dt, false).final_value()[0] - 10.0);
  };
  const double e = err(1e-4);
  const double ratio = err(1e-3) / err(5e-4);
  return {e <= 1e-6 && ratio >= 12.0 && ratio <= 20.0, "|r(0.9)-10|=" + fmt(e) + " ratio=" + fmt(ratio)};
}

Outcome support_gap_identity() {
  using Maker = std::function<ConvexSetSpec(std::mt19937_64&, int)>;
  const std::pair<const char*, Maker> reps[] = {
      {"ball", [](std::mt19937_64& r, int k) -> ConvexSetSpec { return random_ball(r, k); }},
      {"box", [](std::mt19937_64& r, int k) -> ConvexSetSpec { return random_box(r, k); }},
      {"polytope", [](std::mt19937_64& r, int k) -> ConvexSetSpec { return random_polytope(r, k); }},
      {"ellipsoid", [](std::mt19937_64& r, int k) -> ConvexSetSpec { return random_ellipsoid(r, k); }},
      {"cap", [](std::mt19937_64& r, int k) -> ConvexSetSpec { return random_cap(r, k); }},
  };
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (const auto& [name, make] : reps) {
    const int max_dim = std::string(name) == "polytope" ? 3 : 4;
    for (int tested = 0; tested < 1000;) {
      const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_dim));
      const ConvexSet set = realize(make(rng, k), 0.0);
      const Vec p = set.reference_point() + gaussian(rng, k, 0.6 * std::max(set.diameter(), 0.1));
      const double d = set.distance(p);
      if (d <= kEpsGeo) continue;
      ++tested;
      worst = std::max(worst, std::abs(set.support_gap(p) - d) / d);
    }
  }
  return {worst <= 1e-8, "worst relative gap " + fmt(worst) + " over 5000 points"};
}

Outcome dini_of_sup_bound() {
  const double dt = 1e-3;
  std::vector<double> S;
  for (int i = 0; i <= 100; ++i) S.push_back(i / 100.0);
  auto g = [](double s, double t) { return s * t - s * s; };
  double worst = -1e300;
  for (const auto& x : dini_of_sup(S, g, {}, 0.0, dt, 2001)) worst = std::max(worst, x.dini - x.argmax_rate);
  return {worst <= 10.0 * dt, "max(dini - argmax rate)=" + fmt(worst) + " on t in [0, 2]"};
}

Outcome gronwall() {
  bool ok = true;
  std::string names;
  for (const auto& s : catalog()) {
    const Timed& t = cached(s.name);
    if (!t.result.verdict.hypothesis_ok) continue;
    ok = ok && t.result.verdict.gronwall_ok;
    names += s.name + " ";
  }
  std::vector<double> ramp(200);
  for (std::size_t j = 0; j < ramp.size(); ++j) ramp[j] = static_cast<double>(j) * 1e-3;
  const bool ramp_fails = !check_gronwall(ramp, 1e-3, 0.0, true);
  return {ok && ramp_fails, "holds on " + names + "and rejects f = t with C = 0"};
}

Outcome max_principle_sign() {
  std::mt19937_64 rng(6);
  int good = 0;
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
    good += n.dot(laplacian(g, 0.0, s).at(best)) <= 1e-12;
  }
  return {good == 100, std::to_string(good) + "/100 sections"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "mplab_acceptance";
  fs::remove_all(root);
  int identical = 0, files = 0;
  for (const auto& s : catalog()) {
    RunOptions a{root / s.name / "a", false, kernels::Exec::parallel};
    RunOptions b{root / s.name / "b", false, kernels::Exec::parallel};
    run_verify(s.config, a);
    run_verify(s.config, b);
    for (const char* file :
         {"hypothesis.csv", "preservation.csv", "monitor.csv", "final_section.csv", "report.json"}) {
      ++files;
      const std::string x = slurp(a.out_dir / file);
      identical += !x.empty() && x == slurp(b.out_dir / file);
    }
  }
  fs::remove_all(root);
  return {identical == files, std::to_string(identical) + "/" + std::to_string(files) + " files identical"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"containment on S1 S2 S3 S6", containment},
      {"avoidance on S4", avoidance},
      {"hypothesis violation on S5", violation},
      {"cone tests agree with oracles", cone_oracles},
      {"fiber RK4 accuracy and order", rk4},
      {"support gap equals distance outside", support_gap_identity},
      {"Dini derivative of a sup", dini_of_sup_bound},
      {"Gronwall check", gronwall},
      {"discrete maximum-principle sign", max_principle_sign},
      {"byte-identical outputs", determinism},
  };
  int failed = 0;
  int id = 1;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id++, name, o.detail.c_str(),
                seconds_since(start));
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
