#pragma once

#include "mplab/dynamics.hpp"
#include "mplab/field.hpp"
#include "mplab/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mplab {

struct GridConfig {
  Topology topology = Topology::circle;
  int nx = 256;
  int ny = 1;
  TimeFn metric_scale = TimeFn::constant(1.0);
  bool operator==(const GridConfig&) const = default;
};

struct FamilyConfig {
  ConvexSetSpec set;
  std::optional<ConvexSetSpec> avoidance;
  bool operator==(const FamilyConfig&) const = default;
};

struct Tolerances {
  std::optional<double> tol_contain;  // default c_tol (h^2 + dt)
  double c_tol = 10.0;
  double epsilon_avoid = 0.0;
  std::optional<double> margin_floor;  // default 3 epsilon_avoid
  bool operator==(const Tolerances&) const = default;
};

struct Checks {
  int space_samples = 256;
  int time_samples = 64;
  SpatialPoint representative_point{};
  int preservation_starts = 64;
  double preservation_dt = 1e-3;
  bool operator==(const Checks& o) const {
    return space_samples == o.space_samples && time_samples == o.time_samples &&
           representative_point.x == o.representative_point.x && representative_point.y == o.representative_point.y &&
           preservation_starts == o.preservation_starts && preservation_dt == o.preservation_dt;
  }
};

struct Expectations {
  std::optional<bool> hypothesis;
  std::optional<bool> containment;
  std::optional<bool> avoidance;
  std::optional<bool> gronwall;
  bool operator==(const Expectations&) const = default;
};

struct RunConfig {
  std::string name;
  std::string description;
  GridConfig grid;
  int fiber_dim = 1;
  ReactionSpec reaction = ZeroReaction{};
  std::vector<Expression> gradient;
  FamilyConfig family;
  Horizon horizon;
  std::vector<Expression> initial;
  double dt = 0.0;
  int record_every = 10;
  std::uint64_t seed = 0;
  bool jitter = false;
  Tolerances tolerances;
  Checks checks;
  Expectations expected;
  std::string output_dir;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and fully validates a config; errors are ConfigError naming the offending path.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);
/// Pretty-printed JSON with a trailing newline.
std::string dump_config(const RunConfig& config);

/// Re-runs the semantic checks (dimensions, CFL, containment of the avoidance set, initial data).
void validate(const RunConfig& config);

ManifoldGrid build_grid(const RunConfig& config);
SpaceTimeTrack build_track(const RunConfig& config);
/// Reaction field calibrated against the main family.
ReactionField build_reaction(const RunConfig& config);
PdeConfig build_pde(const RunConfig& config, kernels::Exec exec = kernels::Exec::parallel);

double effective_tol_contain(const RunConfig& config);
double effective_margin_floor(const RunConfig& config);

nlohmann::json time_fn_to_json(const TimeFn& f);
TimeFn time_fn_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json set_to_json(const ConvexSetSpec& spec);
ConvexSetSpec set_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json reaction_to_json(const ReactionSpec& spec);
ReactionSpec reaction_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace mplab
