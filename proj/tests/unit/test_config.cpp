#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mplab/config.hpp"
#include "mplab/scenarios.hpp"

#include <cmath>

using namespace mplab;
using nlohmann::json;

namespace {

json base() {
  return json::parse(R"js({
    "name": "t",
    "grid": {"topology": "circle", "n": 64},
    "fiber_dim": 1,
    "reaction": {"builtin": "zero"},
    "family": {"set": {"type": "box", "lower": [-1], "upper": [1]}},
    "horizon": [0, 0.5],
    "initial": ["0.5*cos(x)"],
    "dt": 1e-3
  })js");
}

std::string error_path(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

std::string error_text(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config(base().dump());
  CHECK(c.name == "t");
  CHECK(c.grid.nx == 64);
  CHECK(c.record_every == 10);
  CHECK(c.tolerances.c_tol == 10.0);
  CHECK_FALSE(c.tolerances.tol_contain);
  CHECK_FALSE(c.family.avoidance);
  CHECK(c.checks.space_samples == 256);
  CHECK(effective_tol_contain(c) == doctest::Approx(10.0 * (std::pow(2 * M_PI / 64, 2) + 1e-3)));
  CHECK(effective_margin_floor(c) == 0.0);
}

TEST_CASE("catalog round-trips through json") {
  for (const auto& s : catalog()) {
    CAPTURE(s.name);
    const std::string text = dump_config(s.config);
    const RunConfig back = parse_config(text);
    CHECK(back == s.config);
    CHECK(dump_config(back) == text);
  }
}

TEST_CASE("unknown keys are rejected with their path") {
  json j = base();
  j["grid"]["spacing"] = 0.1;
  CHECK(error_path(j) == "grid.spacing");

  j = base();
  j["colour"] = "red";
  CHECK(error_path(j) == "colour");

  j = base();
  j["family"]["set"]["radius"] = 1;
  CHECK(error_path(j) == "family.set.radius");

  j = base();
  j["grid"]["metric_scale"] = {{"kind", "linear"}, {"offset", 1}, {"slope", 0}, {"bias", 2}};
  CHECK(error_path(j) == "grid.metric_scale.bias");
}

TEST_CASE("wrong types name the offending value") {
  json j = base();
  j["dt"] = "small";
  CHECK(error_path(j) == "dt");
  CHECK(error_text(j).find("expected a number") != std::string::npos);

  j = base();
  j["grid"]["n"] = 64.5;
  CHECK(error_path(j) == "grid.n");

  j = base();
  j["initial"] = {"cos(x", "1"};
  CHECK(error_path(j).rfind("initial", 0) == 0);

  j = base();
  j["family"]["set"]["upper"][0] = true;
  CHECK(error_path(j) == "family.set.upper[0]");

  j = base();
  j.erase("horizon");
  CHECK(error_path(j) == "horizon");

  CHECK(error_path(json::array()) == "<root>");
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
}

TEST_CASE("semantic errors") {
  json j = base();
  j["dt"] = 0.1;
  CHECK(error_path(j) == "dt");
  CHECK(error_text(j).find("CFL") != std::string::npos);

  j = base();
  j["family"]["avoidance"] = {{"type", "ball"}, {"center", {0, 0}}, {"radius", 0.1}};
  CHECK(error_path(j) == "family.avoidance");

  j = base();
  j["initial"] = {"2"};
  CHECK(error_path(j) == "initial");

  j = base();
  j["initial"] = {"0", "0"};
  CHECK(error_path(j) == "initial");

  j = base();
  j["grid"]["metric_scale"] = {{"kind", "linear"}, {"offset", 1}, {"slope", -4}};
  CHECK(error_path(j) == "grid");

  j = base();
  j["expected"] = {{"hypothesis", false}, {"containment", true}};
  CHECK(error_path(j) == "expected");
}

TEST_CASE("time function forms") {
  CHECK(time_fn_from_json(2.5, "x")(7.0) == 2.5);
  CHECK(time_fn_from_json(json{{"kind", "constant"}, {"value", 3}}, "x")(1.0) == 3.0);
  CHECK(time_fn_from_json(json{{"kind", "linear"}, {"offset", 1}, {"slope", 2}}, "x")(0.5) == 2.0);
  CHECK(time_fn_from_json(json{{"kind", "reciprocal"}, {"scale", 1}, {"blowup_time", 1}}, "x")(0.5) ==
        doctest::Approx(2.0));
  CHECK(time_fn_from_json(json{{"kind", "sinusoid"}, {"offset", 1}, {"amplitude", 2}, {"frequency", 1}}, "x")(0.0) ==
        doctest::Approx(1.0));
  CHECK(time_fn_from_json(json{{"kind", "polynomial"}, {"coefficients", {1, 0, 3}}}, "x")(2.0) == 13.0);

  try {
    time_fn_from_json(json{{"kind", "cubic"}}, "grid.metric_scale");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "grid.metric_scale.kind");
  }

  for (const TimeFn& f : {TimeFn::constant(1.5), TimeFn::linear(1, 2), TimeFn::reciprocal(1, 2, 3),
                          TimeFn::sinusoid(1, 2, 3, 4), TimeFn::polynomial({1, 2, 3})})
    CHECK(time_fn_from_json(time_fn_to_json(f), "x") == f);
}

TEST_CASE("reaction forms") {
  const json lin = {{"builtin", "linear"}, {"matrix", {{0, 1}, {-1, 0}}}};
  const ReactionSpec r = reaction_from_json(lin, "reaction");
  CHECK(std::holds_alternative<LinearReaction>(r));
  CHECK(reaction_to_json(reaction_from_json(reaction_to_json(r), "reaction")) == reaction_to_json(r));

  const json expr = {{"expression", {"-v0", "v0*t"}}};
  CHECK(std::holds_alternative<ExpressionReaction>(reaction_from_json(expr, "reaction")));

  try {
    reaction_from_json(json{{"builtin", "cubic"}}, "reaction");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path().rfind("reaction", 0) == 0);
  }
}

TEST_CASE("builders") {
  const RunConfig c = parse_config(base().dump());
  CHECK(build_grid(c).nodes() == 64);
  CHECK(build_track(c).dim() == 1);
  const PdeConfig p = build_pde(c, kernels::Exec::serial);
  CHECK(p.dt == 1e-3);
  CHECK(p.exec == kernels::Exec::serial);
  CHECK(build_reaction(c).lipschitz() == 0.0);
}
