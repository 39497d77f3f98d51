#include "mplab/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mplab {

namespace {

constexpr int kValidationPoints = 65;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec eval(const TimeVec& v, double t) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i](t);
  return out;
}

bool all_constant(const TimeVec& v) {
  return std::all_of(v.begin(), v.end(), [](const TimeFn& f) { return f.is_time_constant(); });
}

void validate_fns(const TimeVec& v, const Horizon& h) {
  for (const auto& f : v) f.validate_on(h.start, h.end);
}

void check_dim(std::size_t n, const char* what) {
  if (n < 1 || n > static_cast<std::size_t>(kMaxFiberDim)) {
    std::ostringstream msg;
    msg << what << " has dimension " << n << "; fibers must have dimension 1.." << kMaxFiberDim;
    throw DomainError(msg.str());
  }
}

std::string at_time(double t) {
  std::ostringstream s;
  s << " at t=" << t;
  return s.str();
}

// Bounded and nonempty: vertices of the polytope clipped to a large box must stay off the box.
void check_polytope_bounded(const Polytope& poly, int dim, double t) {
  constexpr double kFar = 1e6;
  std::vector<Vec> normals = poly.normals;
  std::vector<double> offsets = poly.offsets;
  for (int i = 0; i < dim; ++i) {
    normals.push_back(Vec::Unit(dim, i));
    offsets.push_back(kFar);
    normals.push_back(-Vec::Unit(dim, i));
    offsets.push_back(kFar);
  }
  const auto clipped = enumerate_vertices(normals, offsets, dim);
  if (clipped.empty()) throw DomainError("polytope is empty" + at_time(t));
  for (const auto& v : clipped)
    if (v.lpNorm<Eigen::Infinity>() >= kFar * (1.0 - 1e-9)) throw DomainError("polytope is unbounded" + at_time(t));
}

}  // namespace

int fiber_dim(const ConvexSetSpec& spec) {
  return std::visit(overloaded{[](const BallSpec& s) { return static_cast<int>(s.center.size()); },
                               [](const BoxSpec& s) { return static_cast<int>(s.lower.size()); },
                               [](const PolytopeSpec& s) {
                                 return s.constraints.empty() ? 0 : static_cast<int>(s.constraints[0].normal.size());
                               },
                               [](const EllipsoidSpec& s) { return static_cast<int>(s.center.size()); },
                               [](const CapSpec& s) { return static_cast<int>(s.center.size()); }},
                    spec);
}

bool is_time_constant(const ConvexSetSpec& spec) {
  return std::visit(overloaded{[](const BallSpec& s) { return all_constant(s.center) && s.radius.is_time_constant(); },
                               [](const BoxSpec& s) { return all_constant(s.lower) && all_constant(s.upper); },
                               [](const PolytopeSpec& s) {
                                 return std::all_of(s.constraints.begin(), s.constraints.end(), [](const auto& c) {
                                   return all_constant(c.normal) && c.offset.is_time_constant();
                                 });
                               },
                               [](const EllipsoidSpec& s) {
                                 return all_constant(s.center) &&
                                        std::all_of(s.shape.begin(), s.shape.end(), all_constant);
                               },
                               [](const CapSpec& s) {
                                 return all_constant(s.center) && s.radius.is_time_constant() &&
                                        all_constant(s.direction) && s.threshold.is_time_constant();
                               }},
                    spec);
}

ConvexSet realize(const ConvexSetSpec& spec, double t) {
  return std::visit(
      overloaded{
          [&](const BallSpec& s) {
            const double r = s.radius(t);
            if (!(r > 0.0)) throw DomainError("ball radius must be positive" + at_time(t));
            return ConvexSet(Ball{eval(s.center, t), r});
          },
          [&](const BoxSpec& s) {
            if (s.lower.size() != s.upper.size()) throw DomainError("box bounds have different dimensions");
            Box b{eval(s.lower, t), eval(s.upper, t)};
            for (Eigen::Index i = 0; i < b.lower.size(); ++i)
              if (!(b.lower[i] <= b.upper[i])) throw DomainError("box lower bound exceeds upper bound" + at_time(t));
            return ConvexSet(b);
          },
          [&](const PolytopeSpec& s) {
            Polytope poly;
            const int dim = fiber_dim(spec);
            for (const auto& c : s.constraints) {
              if (static_cast<int>(c.normal.size()) != dim) throw DomainError("polytope normals have mixed dimensions");
              const Vec n = eval(c.normal, t);
              const double len = n.norm();
              if (!(len > 0.0)) throw DomainError("polytope constraint has a zero normal" + at_time(t));
              poly.normals.push_back(n / len);
              poly.offsets.push_back(c.offset(t) / len);
            }
            poly.vertices = enumerate_vertices(poly.normals, poly.offsets, dim);
            if (poly.vertices.empty()) throw DomainError("polytope has no vertices (empty or unbounded)" + at_time(t));
            return ConvexSet(std::move(poly));
          },
          [&](const EllipsoidSpec& s) {
            const auto k = static_cast<Eigen::Index>(s.center.size());
            if (static_cast<Eigen::Index>(s.shape.size()) != k) throw DomainError("ellipsoid shape has wrong size");
            Mat q(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
              if (static_cast<Eigen::Index>(s.shape[static_cast<std::size_t>(i)].size()) != k)
                throw DomainError("ellipsoid shape has wrong size");
              for (Eigen::Index j = 0; j < k; ++j)
                q(i, j) = s.shape[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](t);
            }
            const double asym = (q - q.transpose()).lpNorm<Eigen::Infinity>();
            if (asym > 1e-12 * (1.0 + q.lpNorm<Eigen::Infinity>()))
              throw DomainError("ellipsoid shape is not symmetric" + at_time(t));
            q = 0.5 * (q + q.transpose());
            Eigen::SelfAdjointEigenSolver<Mat> eig(q);
            if (eig.info() != Eigen::Success || !(eig.eigenvalues()[0] > 0.0))
              throw DomainError("ellipsoid shape is not positive definite" + at_time(t));
            return ConvexSet(Ellipsoid{eval(s.center, t), q, eig.eigenvalues(), eig.eigenvectors()});
          },
          [&](const CapSpec& s) {
            const double r = s.radius(t);
            const Vec d = eval(s.direction, t);
            const double theta = s.threshold(t);
            if (!(r > 0.0)) throw DomainError("cap radius must be positive" + at_time(t));
            if (d.size() != static_cast<Eigen::Index>(s.center.size()) || !(d.norm() > 0.0))
              throw DomainError("cap direction must be a nonzero vector of the fiber dimension");
            if (!(std::abs(theta) < r)) throw DomainError("cap threshold must lie strictly inside (-radius, radius)" + at_time(t));
            return ConvexSet(Cap{eval(s.center, t), r, d / d.norm(), theta});
          }},
      spec);
}

// ---------------------------------------------------------------------------

ConvexFamily::ConvexFamily(ConvexSetSpec spec, Horizon horizon)
    : spec_(std::move(spec)), horizon_(horizon), dim_(fiber_dim(spec_)), time_constant_(mplab::is_time_constant(spec_)) {
  if (!(horizon_.end > horizon_.start)) throw DomainError("horizon must satisfy start < end");
  check_dim(static_cast<std::size_t>(dim_), "convex set");
  std::visit(overloaded{[&](const BallSpec& s) {
                          validate_fns(s.center, horizon_);
                          s.radius.validate_on(horizon_.start, horizon_.end);
                        },
                        [&](const BoxSpec& s) {
                          validate_fns(s.lower, horizon_);
                          validate_fns(s.upper, horizon_);
                        },
                        [&](const PolytopeSpec& s) {
                          if (static_cast<int>(s.constraints.size()) <= dim_)
                            throw DomainError("a bounded polytope needs more than k constraints");
                          for (const auto& c : s.constraints) {
                            validate_fns(c.normal, horizon_);
                            c.offset.validate_on(horizon_.start, horizon_.end);
                          }
                        },
                        [&](const EllipsoidSpec& s) {
                          validate_fns(s.center, horizon_);
                          for (const auto& row : s.shape) validate_fns(row, horizon_);
                        },
                        [&](const CapSpec& s) {
                          validate_fns(s.center, horizon_);
                          validate_fns(s.direction, horizon_);
                          s.radius.validate_on(horizon_.start, horizon_.end);
                          s.threshold.validate_on(horizon_.start, horizon_.end);
                        }},
             spec_);

  const bool polytope = std::holds_alternative<PolytopeSpec>(spec_);
  for (double t : validation_times()) {
    const ConvexSet set = realize(spec_, t);
    if (polytope) check_polytope_bounded(std::get<Polytope>(set.shape()), dim_, t);
    // Continuity spot check: a tiny time step moves the set by a tiny amount.
    const double s = 1e-7 * (1.0 + horizon_.length());
    const double t2 = t + s <= horizon_.end ? t + s : t - s;
    const double jump = hausdorff_distance(set, realize(spec_, t2));
    if (!(jump <= 1e-3 * (1.0 + set.diameter())))
      throw DomainError("convex family is not continuous in time" + at_time(t));
  }
}

std::vector<double> ConvexFamily::validation_times() const {
  std::vector<double> times(kValidationPoints);
  for (int i = 0; i < kValidationPoints; ++i) {
    times[static_cast<std::size_t>(i)] =
        i == kValidationPoints - 1
            ? horizon_.end
            : horizon_.start + horizon_.length() * static_cast<double>(i) / (kValidationPoints - 1);
  }
  return times;
}

ConvexSet ConvexFamily::at(double t) const {
  if (!horizon_.contains(t)) {
    std::ostringstream msg;
    msg << "time " << t << " outside horizon [" << horizon_.start << ", " << horizon_.end << "]";
    throw DomainError(msg.str());
  }
  return realize(spec_, std::clamp(t, horizon_.start, horizon_.end));
}

SpaceTimeTrack::SpaceTimeTrack(ConvexFamily main, std::optional<ConvexFamily> avoidance)
    : main_(std::move(main)), avoidance_(std::move(avoidance)) {
  if (!avoidance_) return;
  if (avoidance_->dim() != main_.dim()) throw DomainError("avoidance family has a different fiber dimension");
  if (!(avoidance_->horizon() == main_.horizon())) throw DomainError("avoidance family has a different horizon");
  for (double t : main_.validation_times()) {
    const ConvexSet k = main_.at(t);
    const ConvexSet a = avoidance_->at(t);
    const double tol = kEpsGeo * std::max(1.0, k.diameter());
    for (const auto& p : a.boundary_samples(64)) {
      if (k.distance(p) > tol) throw DomainError("avoidance set is not contained in the main set" + at_time(t));
    }
  }
}

// ---------------------------------------------------------------------------

double distance(const ConvexFamily& family, double t, const Vec& p) { return family.at(t).distance(p); }

Vec project(const ConvexFamily& family, double t, const Vec& p) { return family.at(t).project(p); }

std::vector<Vec> outward_normals(const ConvexFamily& family, double t, const Vec& v) {
  return family.at(t).outward_normals(v);
}

double support_gap(const ConvexFamily& family, double t, const Vec& p) { return family.at(t).support_gap(p); }

bool cone_member_static(const ConvexFamily& family, double t, const Vec& v, const Vec& F) {
  const auto normals = family.at(t).outward_normals(v);
  const double eps = 1e-9 * (F.norm() + 1.0);
  return std::all_of(normals.begin(), normals.end(), [&](const Vec& n) { return n.dot(F) <= eps; });
}

}  // namespace mplab
