#pragma once

#include "mplab/time_fn.hpp"
#include "mplab/types.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace mplab {

using TimeVec = std::vector<TimeFn>;

// ---------------------------------------------------------------------------
// Time-parameterized set descriptions (what a config file names).
// ---------------------------------------------------------------------------

struct BallSpec {
  TimeVec center;
  TimeFn radius;
  bool operator==(const BallSpec&) const = default;
};

struct BoxSpec {
  TimeVec lower;
  TimeVec upper;
  bool operator==(const BoxSpec&) const = default;
};

/// normal . v <= offset
struct HalfSpaceSpec {
  TimeVec normal;
  TimeFn offset;
  bool operator==(const HalfSpaceSpec&) const = default;
};

struct PolytopeSpec {
  std::vector<HalfSpaceSpec> constraints;
  bool operator==(const PolytopeSpec&) const = default;
};

/// (v - center)^T shape (v - center) <= 1, shape symmetric positive definite.
struct EllipsoidSpec {
  TimeVec center;
  std::vector<TimeVec> shape;
  bool operator==(const EllipsoidSpec&) const = default;
};

/// Ball(center, radius) intersected with {v : d . (v - center) >= threshold}, d = direction / |direction|.
struct CapSpec {
  TimeVec center;
  TimeFn radius;
  TimeVec direction;
  TimeFn threshold;
  bool operator==(const CapSpec&) const = default;
};

using ConvexSetSpec = std::variant<BallSpec, BoxSpec, PolytopeSpec, EllipsoidSpec, CapSpec>;

int fiber_dim(const ConvexSetSpec& spec);
bool is_time_constant(const ConvexSetSpec& spec);

// ---------------------------------------------------------------------------
// Realized sets: one time slice of a family.
// ---------------------------------------------------------------------------

struct Ball {
  Vec center;
  double radius;
};

struct Box {
  Vec lower;
  Vec upper;
};

/// Constraints stored with unit normals: normals[a] . v <= offsets[a].
struct Polytope {
  std::vector<Vec> normals;
  std::vector<double> offsets;
  std::vector<Vec> vertices;
};

struct Ellipsoid {
  Vec center;
  Mat shape;
  Vec eigenvalues;  // ascending
  Mat eigenvectors;
};

struct Cap {
  Vec center;
  double radius;
  Vec direction;  // unit
  double threshold;
};

/// A nonempty compact convex subset of R^k, 1 <= k <= 4.
class ConvexSet {
 public:
  using Shape = std::variant<Ball, Box, Polytope, Ellipsoid, Cap>;

  explicit ConvexSet(Shape shape);

  const Shape& shape() const { return shape_; }
  int dim() const { return dim_; }
  double diameter() const { return diameter_; }
  /// Active-set tolerance, 1e-9 times the diameter (floored for degenerate sets).
  double active_tolerance() const;

  double distance(const Vec& p) const;
  Vec project(const Vec& p) const;

  /// sup over boundary points v and unit outward normals n at v of n . (p - v).
  /// Equals distance(p) outside the set and minus the distance to the boundary inside.
  double support_gap(const Vec& p) const;

  /// Generators of the outward normal cone at a boundary point (unit vectors).
  /// Throws DomainError if v is farther than active_tolerance() from the boundary.
  std::vector<Vec> outward_normals(const Vec& v) const;

  /// Support function h(u) = max over the set of u . v.
  double support(const Vec& u) const;

  /// A point of the set away from the boundary (center, midpoint, vertex average).
  Vec reference_point() const;

  /// Deterministic boundary samples: uniform angles for round sets, per-face lattices plus
  /// vertices for Box / Polytope. `n` is the target count (exact for round sets in k = 2).
  std::vector<Vec> boundary_samples(int n) const;

 private:
  Shape shape_;
  int dim_;
  double diameter_;
};

ConvexSet realize(const ConvexSetSpec& spec, double t);

/// Deterministic unit directions in R^k: k = 1 gives {+1, -1}; k = 2 gives n uniform angles;
/// k = 3 a Fibonacci sphere; k = 4 a Hopf-coordinate lattice of roughly n points.
std::vector<Vec> unit_directions(int dim, int n);

/// Hausdorff distance estimated through support functions over unit_directions(dim, 64-256).
double hausdorff_distance(const ConvexSet& a, const ConvexSet& b);

/// All feasible vertices of {x : normals[a] . x <= offsets[a]} (k-subsets of active constraints).
std::vector<Vec> enumerate_vertices(const std::vector<Vec>& normals, const std::vector<double>& offsets,
                                    int dim);

// ---------------------------------------------------------------------------
// Families and tracks.
// ---------------------------------------------------------------------------

/// A convex set varying continuously over a closed horizon. Construction validates the spec on a
/// 65-point time grid (nonempty, bounded, correct dimensions, continuity spot check).
class ConvexFamily {
 public:
  ConvexFamily(ConvexSetSpec spec, Horizon horizon);

  ConvexSet at(double t) const;

  const ConvexSetSpec& spec() const { return spec_; }
  const Horizon& horizon() const { return horizon_; }
  int dim() const { return dim_; }
  bool is_time_constant() const { return time_constant_; }

  /// Times at which the family was validated.
  std::vector<double> validation_times() const;

 private:
  ConvexSetSpec spec_;
  Horizon horizon_;
  int dim_;
  bool time_constant_;
};

/// Main family plus an optional avoidance family contained in it.
class SpaceTimeTrack {
 public:
  explicit SpaceTimeTrack(ConvexFamily main, std::optional<ConvexFamily> avoidance = std::nullopt);

  const ConvexFamily& main() const { return main_; }
  const std::optional<ConvexFamily>& avoidance() const { return avoidance_; }
  const Horizon& horizon() const { return main_.horizon(); }
  int dim() const { return main_.dim(); }

 private:
  ConvexFamily main_;
  std::optional<ConvexFamily> avoidance_;
};

// ---------------------------------------------------------------------------
// Family-level operations.
// ---------------------------------------------------------------------------

double distance(const ConvexFamily& family, double t, const Vec& p);
Vec project(const ConvexFamily& family, double t, const Vec& p);
std::vector<Vec> outward_normals(const ConvexFamily& family, double t, const Vec& v);
double support_gap(const ConvexFamily& family, double t, const Vec& p);

/// Polar test of the static tangent cone: every normal generator n at v has n . F <= 1e-9 (|F| + 1).
bool cone_member_static(const ConvexFamily& family, double t, const Vec& v, const Vec& F);

struct ConeVerdict {
  enum class Value { member, non_member, inconclusive };

  Value value = Value::inconclusive;
  std::vector<double> steps;      // s_k = s_max 2^-k
  std::vector<double> quotients;  // q_k = d(v + s_k W, J(t + s_k)) / s_k
  double member_threshold = 0.0;  // max(eps_abs, c_lin s_20)
};

const char* to_string(ConeVerdict::Value v);

/// Forward time-like tangent cone test at a fixed time.
///
/// Realizes the family once at t and at t + s_k for the dyadic schedule, so that many (v, W)
/// pairs at the same time share the work.
class ForwardConeProbe {
 public:
  static constexpr int kLastStep = 20;
  static constexpr double kMaxStep = 1e-2;
  static constexpr double kEpsAbs = 1e-8;
  static constexpr double kDeltaMin = 1e-4;
  static constexpr int kNonMemberFrom = 10;

  ForwardConeProbe(const ConvexFamily& family, double t);

  ConeVerdict classify(const Vec& v, const Vec& W) const;

  double time() const { return t_; }
  const ConvexSet& slice() const { return now_; }
  /// 10 x max(1, Hausdorff speed of the family over the probe window).
  double linear_coefficient() const { return c_lin_; }

 private:
  double t_;
  ConvexSet now_;
  std::vector<double> steps_;
  std::vector<ConvexSet> ahead_;
  double c_lin_;
};

ConeVerdict cone_member_spacetime(const SpaceTimeTrack& track, const Vec& v, double t, const Vec& W);

}  // namespace mplab
