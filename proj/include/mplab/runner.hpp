#pragma once

#include "mplab/config.hpp"
#include "mplab/monitor.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mplab {

struct RunOptions {
  std::filesystem::path out_dir;  // nothing is written when empty
  bool timing = true;             // false writes runtime_s as null
  kernels::Exec exec = kernels::Exec::parallel;
};

HypothesisOptions hypothesis_options(const RunConfig& config, kernels::Exec exec);
PreservationOptions preservation_options(const RunConfig& config, kernels::Exec exec);

struct OdeCheckResult {
  HypothesisReport hypothesis;
  PreservationReport preservation;
  std::optional<std::string> blow_up;  // set when preservation stopped on a non-finite state
};

/// Writes hypothesis.csv and preservation.csv.
OdeCheckResult run_check_ode(const RunConfig& config, const RunOptions& options);

/// Writes monitor.csv and final_section.csv.
MonitoredRun run_simulate(const RunConfig& config, const RunOptions& options);

struct VerifyResult {
  TheoremVerdict verdict;
  bool expectations_met = false;
  double tol_contain = 0.0;
  double margin_floor = 0.0;
  double runtime_s = 0.0;
  OdeCheckResult ode;
  MonitoredRun run;
};

/// Everything: both ODE checks, the monitored PDE run, the verdict. Writes all five outputs
/// (hypothesis.csv, preservation.csv, monitor.csv, final_section.csv, report.json).
VerifyResult run_verify(const RunConfig& config, const RunOptions& options);

bool expectations_met(const Expectations& expected, const TheoremVerdict& verdict);

std::string hypothesis_csv(const HypothesisReport& report);
std::string preservation_csv(const PreservationReport& report);
std::string report_json(const RunConfig& config, const VerifyResult& result, bool timing);

}  // namespace mplab
