#include "mplab/config.hpp"
#include "mplab/monitor.hpp"

#include <set>
#include <sstream>

namespace mplab {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string type_name(const json& j) { return j.type_name(); }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, std::string("expected a number, got ") + type_name(j));
  return j.get<double>();
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, std::string("expected an integer, got ") + type_name(j));
  return j.get<long long>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, std::string("expected true or false, got ") + type_name(j));
  return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, std::string("expected a string, got ") + type_name(j));
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, std::string("expected an array, got ") + type_name(j));
  return j;
}

Expression expression(const json& j, const std::string& path) {
  try {
    return Expression(string(j, path));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<Expression> expressions(const json& j, const std::string& path) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(expression(j[i], index(path, i)));
  return out;
}

json expressions_to_json(const std::vector<Expression>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(e.source());
  return out;
}

/// Object reader that rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object, got " + type_name(j_));
  }

  const json* optional(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* v = optional(key);
    if (!v) throw ConfigError(at(key), "missing required key");
    return *v;
  }

  std::string at(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

TimeVec time_vec(const json& j, const std::string& path) {
  TimeVec out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(time_fn_from_json(j[i], index(path, i)));
  return out;
}

json time_vec_to_json(const TimeVec& v) {
  json out = json::array();
  for (const auto& f : v) out.push_back(time_fn_to_json(f));
  return out;
}

std::vector<TimeVec> time_matrix(const json& j, const std::string& path) {
  std::vector<TimeVec> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(time_vec(j[i], index(path, i)));
  return out;
}

json time_matrix_to_json(const std::vector<TimeVec>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(time_vec_to_json(row));
  return out;
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------

json time_fn_to_json(const TimeFn& f) {
  const auto p = f.params();
  switch (f.kind()) {
    case TimeFn::Kind::constant:
      return p[0];
    case TimeFn::Kind::linear:
      return {{"kind", "linear"}, {"offset", p[0]}, {"slope", p[1]}};
    case TimeFn::Kind::reciprocal:
      return {{"kind", "reciprocal"}, {"scale", p[0]}, {"blowup_time", p[1]}, {"offset", p[2]}};
    case TimeFn::Kind::sinusoid:
      return {{"kind", "sinusoid"}, {"offset", p[0]}, {"amplitude", p[1]}, {"frequency", p[2]}, {"phase", p[3]}};
    case TimeFn::Kind::polynomial:
      return {{"kind", "polynomial"}, {"coefficients", std::vector<double>(p.begin(), p.end())}};
  }
  return nullptr;
}

TimeFn time_fn_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return TimeFn::constant(j.get<double>());
  Reader r(j, path);
  const std::string kind = string(r.required("kind"), r.at("kind"));
  auto num = [&](const char* key) { return number(r.required(key), r.at(key)); };
  auto opt = [&](const char* key, double fallback) {
    const json* v = r.optional(key);
    return v ? number(*v, r.at(key)) : fallback;
  };
  TimeFn out;
  if (kind == "constant") {
    out = TimeFn::constant(num("value"));
  } else if (kind == "linear") {
    out = TimeFn::linear(num("offset"), num("slope"));
  } else if (kind == "reciprocal") {
    out = TimeFn::reciprocal(num("scale"), num("blowup_time"), opt("offset", 0.0));
  } else if (kind == "sinusoid") {
    out = TimeFn::sinusoid(num("offset"), num("amplitude"), num("frequency"), opt("phase", 0.0));
  } else if (kind == "polynomial") {
    std::vector<double> c;
    const json& arr = array(r.required("coefficients"), r.at("coefficients"));
    for (std::size_t i = 0; i < arr.size(); ++i) c.push_back(number(arr[i], index(r.at("coefficients"), i)));
    out = TimeFn::polynomial(std::move(c));
  } else {
    throw ConfigError(r.at("kind"), "unknown time function kind \"" + kind + "\"");
  }
  r.finish();
  return out;
}

json set_to_json(const ConvexSetSpec& spec) {
  return std::visit(
      overloaded{[](const BallSpec& s) -> json {
                   return {{"type", "ball"}, {"center", time_vec_to_json(s.center)}, {"radius", time_fn_to_json(s.radius)}};
                 },
                 [](const BoxSpec& s) -> json {
                   return {{"type", "box"}, {"lower", time_vec_to_json(s.lower)}, {"upper", time_vec_to_json(s.upper)}};
                 },
                 [](const PolytopeSpec& s) -> json {
                   json cs = json::array();
                   for (const auto& c : s.constraints)
                     cs.push_back({{"normal", time_vec_to_json(c.normal)}, {"offset", time_fn_to_json(c.offset)}});
                   return {{"type", "polytope"}, {"constraints", cs}};
                 },
                 [](const EllipsoidSpec& s) -> json {
                   return {{"type", "ellipsoid"},
                           {"center", time_vec_to_json(s.center)},
                           {"shape", time_matrix_to_json(s.shape)}};
                 },
                 [](const CapSpec& s) -> json {
                   return {{"type", "cap"},
                           {"center", time_vec_to_json(s.center)},
                           {"radius", time_fn_to_json(s.radius)},
                           {"direction", time_vec_to_json(s.direction)},
                           {"threshold", time_fn_to_json(s.threshold)}};
                 }},
      spec);
}

ConvexSetSpec set_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string type = string(r.required("type"), r.at("type"));
  ConvexSetSpec out;
  if (type == "ball") {
    out = BallSpec{time_vec(r.required("center"), r.at("center")), time_fn_from_json(r.required("radius"), r.at("radius"))};
  } else if (type == "box") {
    out = BoxSpec{time_vec(r.required("lower"), r.at("lower")), time_vec(r.required("upper"), r.at("upper"))};
  } else if (type == "polytope") {
    PolytopeSpec p;
    const std::string cpath = r.at("constraints");
    const json& cs = array(r.required("constraints"), cpath);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      Reader c(cs[i], index(cpath, i));
      p.constraints.push_back(
          {time_vec(c.required("normal"), c.at("normal")), time_fn_from_json(c.required("offset"), c.at("offset"))});
      c.finish();
    }
    out = std::move(p);
  } else if (type == "ellipsoid") {
    out = EllipsoidSpec{time_vec(r.required("center"), r.at("center")), time_matrix(r.required("shape"), r.at("shape"))};
  } else if (type == "cap") {
    out = CapSpec{time_vec(r.required("center"), r.at("center")), time_fn_from_json(r.required("radius"), r.at("radius")),
                  time_vec(r.required("direction"), r.at("direction")),
                  time_fn_from_json(r.required("threshold"), r.at("threshold"))};
  } else {
    throw ConfigError(r.at("type"), "unknown set type \"" + type + "\"");
  }
  r.finish();
  return out;
}

json reaction_to_json(const ReactionSpec& spec) {
  return std::visit(overloaded{[](const ZeroReaction&) -> json { return {{"builtin", "zero"}}; },
                               [](const SquareReaction&) -> json { return {{"builtin", "square"}}; },
                               [](const LinearReaction& r) -> json {
                                 return {{"builtin", "linear"}, {"matrix", time_matrix_to_json(r.matrix)}};
                               },
                               [](const RotationReaction& r) -> json {
                                 return {{"builtin", "rotation"}, {"omega", r.omega}};
                               },
                               [](const RadialBumpReaction& r) -> json {
                                 return {{"builtin", "radial_bump"},
                                         {"strength", r.strength},
                                         {"direction", r.direction},
                                         {"threshold", r.threshold},
                                         {"width", r.width}};
                               },
                               [](const ExpressionReaction& r) -> json {
                                 return {{"expression", expressions_to_json(r.components)}};
                               }},
                    spec);
}

ReactionSpec reaction_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  const json* builtin = r.optional("builtin");
  const json* expr = r.optional("expression");
  if ((builtin == nullptr) == (expr == nullptr))
    throw ConfigError(path, "give exactly one of \"builtin\" or \"expression\"");
  ReactionSpec out;
  if (expr) {
    out = ExpressionReaction{expressions(*expr, r.at("expression"))};
  } else {
    const std::string name = string(*builtin, r.at("builtin"));
    auto num = [&](const char* key) { return number(r.required(key), r.at(key)); };
    if (name == "zero") {
      out = ZeroReaction{};
    } else if (name == "square") {
      out = SquareReaction{};
    } else if (name == "linear") {
      out = LinearReaction{time_matrix(r.required("matrix"), r.at("matrix"))};
    } else if (name == "rotation") {
      out = RotationReaction{num("omega")};
    } else if (name == "radial_bump") {
      RadialBumpReaction b;
      b.strength = num("strength");
      const json& d = array(r.required("direction"), r.at("direction"));
      for (std::size_t i = 0; i < d.size(); ++i) b.direction.push_back(number(d[i], index(r.at("direction"), i)));
      b.threshold = num("threshold");
      b.width = num("width");
      out = std::move(b);
    } else {
      throw ConfigError(r.at("builtin"), "unknown builtin reaction \"" + name + "\"");
    }
  }
  r.finish();
  return out;
}

// ---------------------------------------------------------------------------

RunConfig config_from_json(const json& j) {
  Reader r(j, "");
  RunConfig c;
  if (const json* v = r.optional("name")) c.name = string(*v, "name");
  if (const json* v = r.optional("description")) c.description = string(*v, "description");

  {
    Reader g(r.required("grid"), "grid");
    const std::string topo = string(g.required("topology"), "grid.topology");
    if (topo == "circle") {
      c.grid.topology = Topology::circle;
      c.grid.nx = static_cast<int>(integer(g.required("n"), "grid.n"));
      c.grid.ny = 1;
    } else if (topo == "torus") {
      c.grid.topology = Topology::torus;
      c.grid.nx = static_cast<int>(integer(g.required("nx"), "grid.nx"));
      c.grid.ny = static_cast<int>(integer(g.required("ny"), "grid.ny"));
    } else {
      throw ConfigError("grid.topology", "expected \"circle\" or \"torus\"");
    }
    if (const json* v = g.optional("metric_scale")) c.grid.metric_scale = time_fn_from_json(*v, "grid.metric_scale");
    g.finish();
  }

  c.fiber_dim = static_cast<int>(integer(r.required("fiber_dim"), "fiber_dim"));
  c.reaction = reaction_from_json(r.required("reaction"), "reaction");
  if (const json* v = r.optional("gradient")) c.gradient = expressions(*v, "gradient");

  {
    Reader f(r.required("family"), "family");
    c.family.set = set_from_json(f.required("set"), "family.set");
    if (const json* v = f.optional("avoidance"); v && !v->is_null())
      c.family.avoidance = set_from_json(*v, "family.avoidance");
    f.finish();
  }

  {
    const json& h = array(r.required("horizon"), "horizon");
    if (h.size() != 2) throw ConfigError("horizon", "expected [t_start, t_end]");
    c.horizon = {number(h[0], "horizon[0]"), number(h[1], "horizon[1]")};
  }
  c.initial = expressions(r.required("initial"), "initial");
  c.dt = number(r.required("dt"), "dt");
  if (const json* v = r.optional("record_every")) c.record_every = static_cast<int>(integer(*v, "record_every"));
  if (const json* v = r.optional("seed")) {
    if (!v->is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (const json* v = r.optional("jitter")) c.jitter = boolean(*v, "jitter");

  if (const json* v = r.optional("tolerances")) {
    Reader t(*v, "tolerances");
    if (const json* x = t.optional("tol_contain"); x && !x->is_null()) c.tolerances.tol_contain = number(*x, t.at("tol_contain"));
    if (const json* x = t.optional("c_tol")) c.tolerances.c_tol = number(*x, t.at("c_tol"));
    if (const json* x = t.optional("epsilon_avoid")) c.tolerances.epsilon_avoid = number(*x, t.at("epsilon_avoid"));
    if (const json* x = t.optional("margin_floor"); x && !x->is_null())
      c.tolerances.margin_floor = number(*x, t.at("margin_floor"));
    t.finish();
  }

  if (const json* v = r.optional("checks")) {
    Reader k(*v, "checks");
    if (const json* x = k.optional("space_samples")) c.checks.space_samples = static_cast<int>(integer(*x, k.at("space_samples")));
    if (const json* x = k.optional("time_samples")) c.checks.time_samples = static_cast<int>(integer(*x, k.at("time_samples")));
    if (const json* x = k.optional("representative_point")) {
      const json& p = array(*x, k.at("representative_point"));
      if (p.size() != 2) throw ConfigError(k.at("representative_point"), "expected [x, y]");
      c.checks.representative_point = {number(p[0], k.at("representative_point") + "[0]"),
                                       number(p[1], k.at("representative_point") + "[1]")};
    }
    if (const json* x = k.optional("preservation_starts"))
      c.checks.preservation_starts = static_cast<int>(integer(*x, k.at("preservation_starts")));
    if (const json* x = k.optional("preservation_dt")) c.checks.preservation_dt = number(*x, k.at("preservation_dt"));
    k.finish();
  }

  if (const json* v = r.optional("expected")) {
    Reader e(*v, "expected");
    auto flag = [&](const char* key, std::optional<bool>& out) {
      if (const json* x = e.optional(key); x && !x->is_null()) out = boolean(*x, e.at(key));
    };
    flag("hypothesis", c.expected.hypothesis);
    flag("containment", c.expected.containment);
    flag("avoidance", c.expected.avoidance);
    flag("gronwall", c.expected.gronwall);
    e.finish();
  }

  if (const json* v = r.optional("output_dir")) c.output_dir = string(*v, "output_dir");
  r.finish();
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  RunConfig c = config_from_json(j);
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  json grid;
  if (c.grid.topology == Topology::circle) {
    grid = {{"topology", "circle"}, {"n", c.grid.nx}};
  } else {
    grid = {{"topology", "torus"}, {"nx", c.grid.nx}, {"ny", c.grid.ny}};
  }
  grid["metric_scale"] = time_fn_to_json(c.grid.metric_scale);
  j["grid"] = grid;
  j["fiber_dim"] = c.fiber_dim;
  j["reaction"] = reaction_to_json(c.reaction);
  j["gradient"] = expressions_to_json(c.gradient);
  json family = {{"set", set_to_json(c.family.set)}};
  if (c.family.avoidance) family["avoidance"] = set_to_json(*c.family.avoidance);
  j["family"] = family;
  j["horizon"] = {c.horizon.start, c.horizon.end};
  j["initial"] = expressions_to_json(c.initial);
  j["dt"] = c.dt;
  j["record_every"] = c.record_every;
  j["seed"] = c.seed;
  j["jitter"] = c.jitter;
  json tol = {{"c_tol", c.tolerances.c_tol}, {"epsilon_avoid", c.tolerances.epsilon_avoid}};
  if (c.tolerances.tol_contain) tol["tol_contain"] = *c.tolerances.tol_contain;
  if (c.tolerances.margin_floor) tol["margin_floor"] = *c.tolerances.margin_floor;
  j["tolerances"] = tol;
  j["checks"] = {{"space_samples", c.checks.space_samples},
                 {"time_samples", c.checks.time_samples},
                 {"representative_point", {c.checks.representative_point.x, c.checks.representative_point.y}},
                 {"preservation_starts", c.checks.preservation_starts},
                 {"preservation_dt", c.checks.preservation_dt}};
  j["expected"] = {{"hypothesis", optional_bool(c.expected.hypothesis)},
                   {"containment", optional_bool(c.expected.containment)},
                   {"avoidance", optional_bool(c.expected.avoidance)},
                   {"gronwall", optional_bool(c.expected.gronwall)}};
  j["output_dir"] = c.output_dir;
  return j;
}

std::string dump_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

// ---------------------------------------------------------------------------

ManifoldGrid build_grid(const RunConfig& c) {
  return c.grid.topology == Topology::circle ? ManifoldGrid::circle(c.grid.nx, c.grid.metric_scale)
                                             : ManifoldGrid::torus(c.grid.nx, c.grid.ny, c.grid.metric_scale);
}

SpaceTimeTrack build_track(const RunConfig& c) {
  std::optional<ConvexFamily> main;
  try {
    main.emplace(c.family.set, c.horizon);
  } catch (const Error& e) {
    throw ConfigError("family.set", e.what());
  }
  if (!c.family.avoidance) return SpaceTimeTrack(std::move(*main));
  try {
    return SpaceTimeTrack(std::move(*main), ConvexFamily(*c.family.avoidance, c.horizon));
  } catch (const Error& e) {
    throw ConfigError("family.avoidance", e.what());
  }
}

ReactionField build_reaction(const RunConfig& c) {
  std::optional<ReactionField> field;
  try {
    field.emplace(c.reaction, c.fiber_dim);
  } catch (const Error& e) {
    throw ConfigError("reaction", e.what());
  }
  try {
    field->calibrate(ConvexFamily(c.family.set, c.horizon), c.checks.representative_point);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("reaction", e.what());
  }
  return *field;
}

PdeConfig build_pde(const RunConfig& c, kernels::Exec exec) {
  std::optional<ManifoldGrid> grid;
  try {
    grid.emplace(build_grid(c));
  } catch (const Error& e) {
    throw ConfigError("grid", e.what());
  }
  return PdeConfig{*grid, build_reaction(c), GradientCoeffs{c.gradient}, build_track(c), c.initial,
                   c.dt,  c.record_every,  exec};
}

double effective_tol_contain(const RunConfig& c) {
  if (c.tolerances.tol_contain) return *c.tolerances.tol_contain;
  return default_tol_contain(build_grid(c), c.dt, c.tolerances.c_tol);
}

double effective_margin_floor(const RunConfig& c) {
  return c.tolerances.margin_floor ? *c.tolerances.margin_floor : 3.0 * c.tolerances.epsilon_avoid;
}

void validate(const RunConfig& c) {
  if (c.fiber_dim < 1 || c.fiber_dim > kMaxFiberDim) throw ConfigError("fiber_dim", "must be between 1 and 4");
  if (!(c.horizon.end > c.horizon.start)) throw ConfigError("horizon", "need t_start < t_end");
  if (fiber_dim(c.family.set) != c.fiber_dim) throw ConfigError("family.set", "dimension differs from fiber_dim");
  if (c.family.avoidance && fiber_dim(*c.family.avoidance) != c.fiber_dim)
    throw ConfigError("family.avoidance", "dimension differs from fiber_dim");
  if (static_cast<int>(c.initial.size()) != c.fiber_dim)
    throw ConfigError("initial", "need one expression per fiber component");
  for (std::size_t i = 0; i < c.initial.size(); ++i)
    for (const char* v : {"v0", "v1", "v2", "v3"})
      if (c.initial[i].uses(v)) throw ConfigError(index("initial", i), "initial data may depend on x, y and t only");
  if (c.record_every < 1) throw ConfigError("record_every", "must be at least 1");
  if (!(c.tolerances.c_tol > 0.0)) throw ConfigError("tolerances.c_tol", "must be positive");
  if (!(c.tolerances.epsilon_avoid >= 0.0)) throw ConfigError("tolerances.epsilon_avoid", "must be nonnegative");
  if (c.tolerances.tol_contain && !(*c.tolerances.tol_contain >= 0.0))
    throw ConfigError("tolerances.tol_contain", "must be nonnegative");
  if (c.checks.space_samples < 1) throw ConfigError("checks.space_samples", "must be at least 1");
  if (c.checks.time_samples < 1) throw ConfigError("checks.time_samples", "must be at least 1");
  if (c.checks.preservation_starts < 1) throw ConfigError("checks.preservation_starts", "must be at least 1");
  if (!(c.checks.preservation_dt > 0.0)) throw ConfigError("checks.preservation_dt", "must be positive");
  if (c.expected.hypothesis == false && c.expected.containment == true)
    throw ConfigError("expected", "a failing hypothesis cannot require a containment pass");

  std::optional<ManifoldGrid> grid;
  try {
    grid.emplace(build_grid(c));
    grid->rho_min(c.horizon);
  } catch (const Error& e) {
    throw ConfigError("grid", e.what());
  }
  const int dims = grid->dims();
  if (!c.gradient.empty() && static_cast<int>(c.gradient.size()) != dims)
    throw ConfigError("gradient", "need one expression per grid direction (or none)");
  for (std::size_t i = 0; i < c.gradient.size(); ++i)
    for (const char* v : {"v0", "v1", "v2", "v3"})
      if (c.gradient[i].uses(v)) throw ConfigError(index("gradient", i), "coefficients may depend on x, y and t only");

  const bool has_gradient = !GradientCoeffs{c.gradient}.is_zero();
  const double bound = stability_bound(*grid, c.horizon, has_gradient);
  if (!(c.dt > 0.0) || c.dt > bound) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "dt = " << c.dt << " exceeds the CFL stability bound 0.5*rho_min^2*h^2/(2*dims)"
        << (has_gradient ? "*0.8" : "") << " = " << bound;
    throw ConfigError("dt", msg.str());
  }

  const PdeConfig pde = build_pde(c);
  try {
    validate(pde);
  } catch (const DomainError& e) {
    throw ConfigError("initial", e.what());
  }
}

}  // namespace mplab
