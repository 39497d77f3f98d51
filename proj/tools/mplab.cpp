#include "mplab/config.hpp"
#include "mplab/io.hpp"
#include "mplab/runner.hpp"
#include "mplab/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace mplab;

constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

struct Overrides {
  std::string config_path;
  std::string out;
  int record_every = 0;
  double tol_contain = -1.0;
  std::int64_t seed = -1;
  std::string jitter;
  std::string timing = "on";
};

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  std::stringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.path(), e.reason());
  }
}

void apply(const Overrides& o, RunConfig& c) {
  if (o.record_every != 0) c.record_every = o.record_every;
  if (o.tol_contain >= 0.0) c.tolerances.tol_contain = o.tol_contain;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.jitter.empty()) c.jitter = o.jitter == "on";
  if (o.record_every != 0 || o.tol_contain >= 0.0) validate(c);
}

std::filesystem::path out_dir(const Overrides& o, const RunConfig& c) {
  if (!o.out.empty()) return o.out;
  if (!c.output_dir.empty()) return c.output_dir;
  return std::filesystem::path("out") / (c.name.empty() ? "run" : c.name);
}

RunOptions run_options(const Overrides& o, const RunConfig& c) {
  RunOptions r;
  r.out_dir = out_dir(o, c);
  r.timing = o.timing == "on";
  return r;
}

void add_common(CLI::App* cmd, Overrides& o, bool needs_config) {
  auto* cfg = cmd->add_option("--config", o.config_path, "run configuration (JSON)");
  if (needs_config) cfg->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--record-every", o.record_every, "monitor every N steps")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-contain", o.tol_contain, "containment tolerance override")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "sampling seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--jitter", o.jitter, "jitter hypothesis sample times")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--timing", o.timing, "record wall-clock runtime in report.json")
      ->check(CLI::IsMember({"on", "off"}));
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_verdict(const RunConfig& c, const VerifyResult& r) {
  const auto& v = r.verdict;
  std::cout << (c.name.empty() ? "run" : c.name) << ": hypothesis=" << yes_no(v.hypothesis_ok)
            << " containment=" << yes_no(v.containment_ok) << " avoidance=" << yes_no(v.avoidance_ok)
            << " gronwall=" << yes_no(v.gronwall_ok) << "\n  " << v.details << "\n  expectations "
            << (r.expectations_met ? "met" : "NOT met") << "\n";
}

int do_verify(const RunConfig& c, const Overrides& o) {
  const RunOptions opts = run_options(o, c);
  const VerifyResult r = run_verify(c, opts);
  print_verdict(c, r);
  std::cout << "  outputs in " << opts.out_dir.string() << "\n";
  return r.expectations_met ? 0 : kExitMismatch;
}

int do_check_ode(const RunConfig& c, const Overrides& o) {
  const RunOptions opts = run_options(o, c);
  const OdeCheckResult r = run_check_ode(c, opts);
  const auto& h = r.hypothesis;
  std::cout << "hypothesis: " << (h.holds_everywhere_tested ? "holds" : "fails") << " on " << h.samples.size()
            << " samples (" << h.members << " member, " << h.non_members << " non-member, " << h.inconclusive
            << " inconclusive, " << h.excluded << " excluded)\n";
  std::cout << "preservation: max excursion " << r.preservation.max_excursion;
  if (r.preservation.first_exit)
    std::cout << ", first exit from start " << r.preservation.first_exit->start << " at t="
              << r.preservation.first_exit->time;
  if (r.preservation.first_avoidance_entry)
    std::cout << ", first avoidance entry at t=" << r.preservation.first_avoidance_entry->time;
  if (r.blow_up) std::cout << ", stopped: " << *r.blow_up;
  std::cout << "\noutputs in " << opts.out_dir.string() << "\n";
  if (c.expected.hypothesis && *c.expected.hypothesis != h.holds_everywhere_tested) return kExitMismatch;
  return 0;
}

int do_simulate(const RunConfig& c, const Overrides& o) {
  const RunOptions opts = run_options(o, c);
  const MonitoredRun run = run_simulate(c, opts);
  const double tol = effective_tol_contain(c);
  double max_f = 0.0;
  for (double f : run.series.f) max_f = std::max(max_f, f);
  const bool contained = max_f <= tol;
  std::cout << "simulated " << run.series.size() << " records to t=" << run.final_state.time << "; max f = " << max_f
            << " (tol " << tol << ")\noutputs in " << opts.out_dir.string() << "\n";
  if (c.expected.containment && *c.expected.containment != contained) return kExitMismatch;
  return 0;
}

Vec parse_vec(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what, "expected comma-separated numbers, got \"" + text + "\"");
    }
  }
  if (vals.empty() || vals.size() > static_cast<std::size_t>(kMaxFiberDim))
    throw ConfigError(what, "expected 1 to 4 numbers");
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

int do_check_cone(const RunConfig& c, const std::string& v_text, double t, const std::string& w_text) {
  const SpaceTimeTrack track = build_track(c);
  const ConeVerdict verdict = cone_member_spacetime(track, parse_vec(v_text, "--v"), t, parse_vec(w_text, "--w"));
  std::cout << "verdict: " << to_string(verdict.value) << "\nthreshold: " << format_number(verdict.member_threshold)
            << "\nk,s_k,q_k\n";
  for (std::size_t k = 0; k < verdict.steps.size(); ++k)
    std::cout << k << "," << format_number(verdict.steps[k]) << "," << format_number(verdict.quotients[k]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mplab: numerical checks of the maximum principle for time-dependent convex sets"};
  app.require_subcommand(1);

  Overrides o;
  auto* check_ode = app.add_subcommand("check-ode", "tangent-cone hypothesis and ODE preservation checks");
  add_common(check_ode, o, true);

  auto* check_cone = app.add_subcommand("check-cone", "single space-time cone test with its evidence");
  add_common(check_cone, o, true);
  std::string v_text, w_text;
  double t_cone = 0.0;
  check_cone->add_option("--v", v_text, "point on the track, e.g. 1,0")->required();
  check_cone->add_option("--t", t_cone, "time")->required();
  check_cone->add_option("--w", w_text, "direction, e.g. -0.5,0")->required();

  auto* simulate = app.add_subcommand("simulate", "monitored PDE run");
  add_common(simulate, o, true);
  auto* verify = app.add_subcommand("verify", "all checks plus the theorem verdict");
  add_common(verify, o, true);

  auto* scenario = app.add_subcommand("scenario", "built-in scenario catalog");
  scenario->require_subcommand(1);
  auto* list = scenario->add_subcommand("list", "list the catalog");
  std::string name;
  auto* run = scenario->add_subcommand("run", "verify a catalog entry");
  run->add_option("name", name, "scenario name")->required();
  add_common(run, o, false);
  auto* exp = scenario->add_subcommand("export", "print a catalog entry as a config file");
  exp->add_option("name", name, "scenario name")->required();
  std::string export_path;
  exp->add_option("--out", export_path, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*list) {
      for (const auto& s : catalog()) std::cout << s.name << "  " << s.config.description << "\n";
      return 0;
    }
    if (*run || *exp) {
      const auto s = find_scenario(name);
      if (!s) throw ConfigError("name", "no scenario named \"" + name + "\"");
      if (*exp) {
        const std::string text = dump_config(s->config);
        if (export_path.empty()) {
          std::cout << text;
        } else {
          write_file_atomic(export_path, text);
        }
        return 0;
      }
      RunConfig c = s->config;
      apply(o, c);
      return do_verify(c, o);
    }

    RunConfig c = load(o.config_path);
    apply(o, c);
    if (*check_ode) return do_check_ode(c, o);
    if (*check_cone) return do_check_cone(c, v_text, t_cone, w_text);
    if (*simulate) return do_simulate(c, o);
    if (*verify) return do_verify(c, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error";
    if (!o.config_path.empty()) std::cerr << " (" << o.config_path << ")";
    std::cerr << ": " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
