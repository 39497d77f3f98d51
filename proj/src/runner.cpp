#include "mplab/runner.hpp"
#include "mplab/io.hpp"

#include <chrono>

namespace mplab {

using nlohmann::json;

HypothesisOptions hypothesis_options(const RunConfig& c, kernels::Exec exec) {
  HypothesisOptions o;
  o.space_samples = c.checks.space_samples;
  o.time_samples = c.checks.time_samples;
  o.point = c.checks.representative_point;
  o.exclusion_buffer = 2.0 * c.tolerances.epsilon_avoid;
  if (c.jitter) o.jitter_seed = c.seed;
  o.exec = exec;
  return o;
}

PreservationOptions preservation_options(const RunConfig& c, kernels::Exec exec) {
  PreservationOptions o;
  o.starts = c.checks.preservation_starts;
  o.dt = c.checks.preservation_dt;
  o.point = c.checks.representative_point;
  o.exec = exec;
  return o;
}

std::string hypothesis_csv(const HypothesisReport& r) {
  const int k = r.samples.empty() ? 1 : static_cast<int>(r.samples.front().v.size());
  std::string out = "t";
  for (int i = 0; i < k; ++i) out += ",v" + std::to_string(i);
  out += ",verdict,q_last,threshold\n";
  for (const auto& s : r.samples) {
    out += format_number(s.t);
    for (int i = 0; i < k; ++i) out += "," + format_number(s.v[i]);
    if (s.verdict) {
      out += ",";
      out += to_string(s.verdict->value);
      out += "," + format_number(s.verdict->quotients.back()) + "," + format_number(s.verdict->member_threshold);
    } else {
      out += ",excluded,,";
    }
    out += '\n';
  }
  return out;
}

std::string preservation_csv(const PreservationReport& r) {
  const int k = r.starts.empty() ? 1 : static_cast<int>(r.starts.front().size());
  std::string out = "start";
  for (int i = 0; i < k; ++i) out += ",v" + std::to_string(i);
  out += ",excursion\n";
  for (std::size_t s = 0; s < r.starts.size(); ++s) {
    out += std::to_string(s);
    for (int i = 0; i < k; ++i) out += "," + format_number(r.starts[s][i]);
    out += "," + format_number(r.excursions[s]) + "\n";
  }
  return out;
}

OdeCheckResult run_check_ode(const RunConfig& c, const RunOptions& options) {
  const SpaceTimeTrack track = build_track(c);
  const ReactionField F = build_reaction(c);
  OdeCheckResult res;
  res.hypothesis = check_ode_hypothesis(track, F, hypothesis_options(c, options.exec));
  try {
    res.preservation = check_ode_preservation(track, F, preservation_options(c, options.exec));
  } catch (const PreservationBlowUp& e) {
    res.preservation = e.partial();
    res.blow_up = e.what();
  }
  if (!options.out_dir.empty()) {
    write_file_atomic(options.out_dir / "hypothesis.csv", hypothesis_csv(res.hypothesis));
    write_file_atomic(options.out_dir / "preservation.csv", preservation_csv(res.preservation));
  }
  return res;
}

MonitoredRun run_simulate(const RunConfig& c, const RunOptions& options) {
  const PdeConfig pde = build_pde(c, options.exec);
  MonitoredRun run = run_monitored(pde, effective_tol_contain(c));
  if (!options.out_dir.empty()) {
    write_file_atomic(options.out_dir / "monitor.csv", monitor_csv(run.series));
    write_file_atomic(options.out_dir / "final_section.csv", section_csv(pde.grid, run.final_state));
  }
  return run;
}

bool expectations_met(const Expectations& e, const TheoremVerdict& v) {
  auto ok = [](const std::optional<bool>& want, bool got) { return !want || *want == got; };
  return ok(e.hypothesis, v.hypothesis_ok) && ok(e.containment, v.containment_ok) && ok(e.avoidance, v.avoidance_ok) &&
         ok(e.gronwall, v.gronwall_ok);
}

namespace {

json event_json(const std::optional<StartEvent>& e) {
  if (!e) return nullptr;
  return {{"start", e->start}, {"time", e->time}};
}

json expected_json(const Expectations& e) {
  auto b = [](const std::optional<bool>& x) { return x ? json(*x) : json(nullptr); };
  return {{"hypothesis", b(e.hypothesis)},
          {"containment", b(e.containment)},
          {"avoidance", b(e.avoidance)},
          {"gronwall", b(e.gronwall)}};
}

}  // namespace

std::string report_json(const RunConfig& c, const VerifyResult& r, bool timing) {
  const auto& v = r.verdict;
  json j;
  j["scenario"] = c.name;
  j["verdicts"] = {{"hypothesis", v.hypothesis_ok},
                   {"containment", v.containment_ok},
                   {"avoidance", v.avoidance_ok},
                   {"gronwall", v.gronwall_ok}};
  j["expected"] = expected_json(c.expected);
  j["expectations_met"] = r.expectations_met;
  j["max_f"] = v.max_f;
  j["min_margin"] = v.min_margin ? json(*v.min_margin) : json(nullptr);
  j["tol_contain"] = r.tol_contain;
  j["margin_floor"] = r.margin_floor;
  j["hypothesis"] = {{"members", r.ode.hypothesis.members},
                     {"non_members", r.ode.hypothesis.non_members},
                     {"inconclusive", r.ode.hypothesis.inconclusive},
                     {"excluded", r.ode.hypothesis.excluded},
                     {"space_samples", r.ode.hypothesis.space_samples},
                     {"time_samples", r.ode.hypothesis.times.size()}};
  j["preservation"] = {{"max_excursion", r.ode.preservation.max_excursion},
                       {"first_exit", event_json(r.ode.preservation.first_exit)},
                       {"first_avoidance_entry", event_json(r.ode.preservation.first_avoidance_entry)},
                       {"dt", r.ode.preservation.dt},
                       {"blow_up", r.ode.blow_up ? json(*r.ode.blow_up) : json(nullptr)}};
  j["details"] = v.details;
  j["runtime_s"] = timing ? json(r.runtime_s) : json(nullptr);
  return j.dump(2) + "\n";
}

VerifyResult run_verify(const RunConfig& c, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyResult res;
  RunOptions quiet = options;
  quiet.out_dir.clear();
  res.ode = run_check_ode(c, quiet);
  const PdeConfig pde = build_pde(c, options.exec);
  res.tol_contain = effective_tol_contain(c);
  res.margin_floor = effective_margin_floor(c);
  res.run = run_monitored(pde, res.tol_contain);
  res.verdict = theorem_verdict(res.ode.hypothesis, res.run.series, res.tol_contain, res.margin_floor,
                                pde.F.lipschitz());
  res.expectations_met = expectations_met(c.expected, res.verdict);
  res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!options.out_dir.empty()) {
    write_file_atomic(options.out_dir / "hypothesis.csv", hypothesis_csv(res.ode.hypothesis));
    write_file_atomic(options.out_dir / "preservation.csv", preservation_csv(res.ode.preservation));
    write_file_atomic(options.out_dir / "monitor.csv", monitor_csv(res.run.series));
    write_file_atomic(options.out_dir / "final_section.csv", section_csv(pde.grid, res.run.final_state));
    write_file_atomic(options.out_dir / "report.json", report_json(c, res, options.timing));
  }
  return res;
}

}  // namespace mplab
