#include "mplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace mplab {

namespace {

constexpr int kMaxNewtonIterations = 100;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Calls fn(indices) for every r-subset of {0..m-1} in lexicographic order.
void for_each_combination(int m, int r, const std::function<void(const std::vector<int>&)>& fn) {
  if (r > m || r < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(idx);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// ----- Ball ---------------------------------------------------------------

Vec project_ball(const Ball& b, const Vec& p) {
  const Vec d = p - b.center;
  const double r = d.norm();
  if (r <= b.radius) return p;
  return b.center + d * (b.radius / r);
}

// ----- Box ----------------------------------------------------------------

Vec project_box(const Box& b, const Vec& p) { return p.cwiseMax(b.lower).cwiseMin(b.upper); }

double box_gap_inside(const Box& b, const Vec& p) {
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.size(); ++i) {
    gap = std::max(gap, p[i] - b.upper[i]);
    gap = std::max(gap, b.lower[i] - p[i]);
  }
  return gap;
}

// ----- Polytope -----------------------------------------------------------

double polytope_violation(const Polytope& poly, const Vec& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < poly.normals.size(); ++a)
    worst = std::max(worst, poly.normals[a].dot(x) - poly.offsets[a]);
  return worst;
}

// Exact projection by face enumeration: the nearest point lies in the relative interior of a
// face, whose affine hull is cut out by at most k linearly independent active constraints.
Vec project_polytope(const Polytope& poly, const Vec& p) {
  double scale = 1.0 + p.lpNorm<Eigen::Infinity>();
  for (double b : poly.offsets) scale = std::max(scale, 1.0 + std::abs(b));
  const double feas_tol = 1e-12 * scale;
  if (polytope_violation(poly, p) <= 0.0) return p;

  const int m = static_cast<int>(poly.normals.size());
  const int k = static_cast<int>(p.size());
  Vec best = p;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= std::min(k, m); ++r) {
    for_each_combination(m, r, [&](const std::vector<int>& subset) {
      Mat A(r, k);
      Vec rhs(r);
      for (int i = 0; i < r; ++i) {
        const auto a = static_cast<std::size_t>(subset[static_cast<std::size_t>(i)]);
        A.row(i) = poly.normals[a].transpose();
        rhs[i] = poly.normals[a].dot(p) - poly.offsets[a];
      }
      const Mat gram = A * A.transpose();
      Eigen::FullPivLU<Mat> lu(gram);
      lu.setThreshold(1e-12);
      if (lu.rank() < r) return;
      const Vec lambda = lu.solve(rhs);
      const Vec x = p - A.transpose() * lambda;
      if (polytope_violation(poly, x) > feas_tol) return;
      const double d = (p - x).norm();
      if (d < best_dist) {
        best_dist = d;
        best = x;
      }
    });
  }
  if (!std::isfinite(best_dist)) throw NumericError("polytope projection found no feasible face", polytope_violation(poly, p));
  return best;
}

double polytope_gap_inside(const Polytope& poly, const Vec& p) { return polytope_violation(poly, p); }

// ----- Ellipsoid ----------------------------------------------------------

// Nearest point of an ellipsoid to an exterior point, in eigen coordinates y.
// Solves sum lambda_i y_i^2 / (1 + mu lambda_i)^2 = 1 for mu >= 0 by Newton from mu = 0;
// the secular function is convex and decreasing there, so the iterates increase monotonically.
Vec ellipsoid_exterior_foot(const Vec& lambda, const Vec& y) {
  double mu = 0.0;
  int it = 0;
  for (; it < kMaxNewtonIterations; ++it) {
    double phi = -1.0;
    double dphi = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double den = 1.0 + mu * lambda[i];
      const double q = lambda[i] * y[i] * y[i] / (den * den);
      phi += q;
      dphi -= 2.0 * q * lambda[i] / den;
    }
    if (std::abs(phi) <= 1e-15 || dphi == 0.0) break;
    const double step = phi / dphi;
    mu -= step;
    if (std::abs(step) <= 1e-17 * (1.0 + mu)) break;
  }
  Vec x(y.size());
  for (int i = 0; i < y.size(); ++i) x[i] = y[i] / (1.0 + mu * lambda[i]);
  double level = 0.0;
  for (int i = 0; i < y.size(); ++i) level += lambda[i] * x[i] * x[i];
  const double residual = std::abs(level - 1.0);
  if (residual > kEpsProj) {
    throw NumericError("ellipsoid projection did not converge after " + std::to_string(it) + " iterations",
                       residual);
  }
  return x;
}

// Nearest boundary point from an interior point y (eigen coordinates). The relevant multiplier
// lies in (-1/lambda_max, 0]; when y has no component along the lambda_max eigenspace the
// secular function stays bounded there and the foot is the degenerate closed-form point.
Vec ellipsoid_interior_foot(const Vec& lambda, const Vec& y) {
  const int k = static_cast<int>(y.size());
  const double lmax = lambda[k - 1];
  const double tie = 1e-12 * lmax;
  auto secular = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      const double den = 1.0 + mu * lambda[i];
      s += lambda[i] * y[i] * y[i] / (den * den);
    }
    return s;
  };
  bool top_empty = true;
  for (int i = 0; i < k; ++i)
    if (lambda[i] >= lmax - tie && y[i] != 0.0) top_empty = false;
  if (top_empty) {
    double partial = 0.0;
    Vec x = Vec::Zero(k);
    int top = -1;
    for (int i = 0; i < k; ++i) {
      if (lambda[i] >= lmax - tie) {
        if (top < 0) top = i;
        continue;
      }
      x[i] = y[i] / (1.0 - lambda[i] / lmax);
      partial += lambda[i] * x[i] * x[i];
    }
    if (partial <= 1.0) {
      x[top] = std::sqrt((1.0 - partial) / lmax);
      return x;
    }
  }
  double lo = -1.0 / lmax;  // secular(lo+) > 1
  double hi = 0.0;          // secular(0) <= 1
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (secular(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Vec x(k);
  for (int i = 0; i < k; ++i) x[i] = y[i] / (1.0 + hi * lambda[i]);
  return x;
}

double ellipsoid_level(const Ellipsoid& e, const Vec& p) {
  const Vec d = p - e.center;
  return d.dot(e.shape * d);
}

Vec project_ellipsoid(const Ellipsoid& e, const Vec& p) {
  if (ellipsoid_level(e, p) <= 1.0) return p;
  const Vec y = e.eigenvectors.transpose() * (p - e.center);
  return e.center + e.eigenvectors * ellipsoid_exterior_foot(e.eigenvalues, y);
}

double ellipsoid_gap_inside(const Ellipsoid& e, const Vec& p) {
  const Vec y = e.eigenvectors.transpose() * (p - e.center);
  return -(ellipsoid_interior_foot(e.eigenvalues, y) - y).norm();
}

// ----- Cap ----------------------------------------------------------------

double cap_rim_radius(const Cap& c) {
  return std::sqrt(std::max(0.0, c.radius * c.radius - c.threshold * c.threshold));
}

bool cap_contains(const Cap& c, const Vec& x, double tol) {
  const Vec d = x - c.center;
  return d.norm() <= c.radius + tol && c.direction.dot(d) >= c.threshold - tol;
}

// Unit vector orthogonal to `dir` (dimension >= 2).
Vec any_orthogonal(const Vec& dir) {
  const int k = static_cast<int>(dir.size());
  int best = 0;
  for (int i = 1; i < k; ++i)
    if (std::abs(dir[i]) < std::abs(dir[best])) best = i;
  Vec e = Vec::Zero(k);
  e[best] = 1.0;
  Vec w = e - dir * dir.dot(e);
  return w / w.norm();
}

// Projection onto ball intersected with a half-space: the nearest point lies in the relative
// interior of one of the faces (interior, spherical part, flat disk, rim); take the nearest
// feasible candidate among the projections onto each face carrier.
Vec project_cap(const Cap& c, const Vec& p) {
  const double tol = 1e-12 * (1.0 + c.radius);
  if (cap_contains(c, p, 0.0)) return p;
  const int k = static_cast<int>(p.size());
  std::vector<Vec> candidates;
  candidates.push_back(project_ball(Ball{c.center, c.radius}, p));
  const Vec plane_point = c.center + c.threshold * c.direction;
  const Vec on_plane = p - c.direction * c.direction.dot(p - plane_point);
  candidates.push_back(on_plane);
  if (k >= 2) {
    Vec w = on_plane - plane_point;
    const double wn = w.norm();
    w = wn > 0.0 ? Vec(w / wn) : any_orthogonal(c.direction);
    candidates.push_back(plane_point + cap_rim_radius(c) * w);
  } else {
    candidates.push_back(plane_point);
  }
  Vec best = candidates.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& x : candidates) {
    if (!cap_contains(c, x, tol)) continue;
    const double d = (x - p).norm();
    if (d < best_dist) {
      best_dist = d;
      best = x;
    }
  }
  return best;
}

double cap_gap_inside(const Cap& c, const Vec& p) {
  const Vec d = p - c.center;
  return std::max(d.norm() - c.radius, c.threshold - c.direction.dot(d));
}

double cap_support(const Cap& c, const Vec& u) {
  const double un = u.norm();
  if (un == 0.0) return 0.0;
  if (c.direction.dot(u) * c.radius / un >= c.threshold) return c.center.dot(u) + c.radius * un;
  const Vec tangential = u - c.direction * c.direction.dot(u);
  return u.dot(c.center + c.threshold * c.direction) + cap_rim_radius(c) * tangential.norm();
}

// ----- shared helpers -----------------------------------------------------

int dim_of(const ConvexSet::Shape& s) {
  return std::visit(overloaded{[](const Ball& b) { return static_cast<int>(b.center.size()); },
                               [](const Box& b) { return static_cast<int>(b.lower.size()); },
                               [](const Polytope& p) {
                                 return p.normals.empty() ? 0 : static_cast<int>(p.normals.front().size());
                               },
                               [](const Ellipsoid& e) { return static_cast<int>(e.center.size()); },
                               [](const Cap& c) { return static_cast<int>(c.center.size()); }},
                    s);
}

double diameter_of(const ConvexSet::Shape& s) {
  return std::visit(
      overloaded{[](const Ball& b) { return 2.0 * b.radius; },
                 [](const Box& b) { return (b.upper - b.lower).norm(); },
                 [](const Polytope& p) {
                   double d = 0.0;
                   for (std::size_t i = 0; i < p.vertices.size(); ++i)
                     for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
                       d = std::max(d, (p.vertices[i] - p.vertices[j]).norm());
                   return d;
                 },
                 [](const Ellipsoid& e) { return 2.0 / std::sqrt(e.eigenvalues[0]); },
                 [](const Cap& c) {
                   if (c.threshold <= 0.0) return 2.0 * c.radius;
                   const double rim = cap_rim_radius(c);
                   return std::max(2.0 * rim, std::hypot(c.radius - c.threshold, rim));
                 }},
      s);
}

// Evenly spaced points on the segment [a, b], endpoints excluded, `count` of them.
void segment_interior(const Vec& a, const Vec& b, int count, std::vector<Vec>& out) {
  for (int i = 1; i <= count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(count + 1);
    out.push_back(a + s * (b - a));
  }
}

std::vector<Vec> box_samples(const Box& b, int n) {
  const int k = static_cast<int>(b.lower.size());
  std::vector<Vec> out;
  if (k == 1) {
    out.push_back(b.lower);
    out.push_back(b.upper);
    return out;
  }
  const double per_face = std::max(1.0, static_cast<double>(n) / (2.0 * k));
  const int m = std::max(2, static_cast<int>(std::lround(std::pow(per_face, 1.0 / (k - 1)))));
  for (int axis = 0; axis < k; ++axis) {
    for (int side = 0; side < 2; ++side) {
      // Lattice over the remaining k-1 coordinates.
      int total = 1;
      for (int j = 0; j < k - 1; ++j) total *= m;
      for (int code = 0; code < total; ++code) {
        Vec x(k);
        int rest = code;
        for (int j = 0; j < k; ++j) {
          if (j == axis) {
            x[j] = side == 0 ? b.lower[j] : b.upper[j];
            continue;
          }
          const int a = rest % m;
          rest /= m;
          const double s = static_cast<double>(a) / static_cast<double>(m - 1);
          x[j] = a == m - 1 ? b.upper[j] : b.lower[j] + s * (b.upper[j] - b.lower[j]);
        }
        // Points lying on an earlier face were already emitted.
        bool duplicate = false;
        for (int j = 0; j < axis && !duplicate; ++j)
          duplicate = x[j] == b.lower[j] || x[j] == b.upper[j];
        if (side == 1 && x[axis] == b.lower[axis]) duplicate = true;
        if (!duplicate) out.push_back(x);
      }
    }
  }
  return out;
}

std::vector<Vec> polytope_samples(const Polytope& poly, int n) {
  std::vector<Vec> out = poly.vertices;
  const int k = poly.vertices.empty() ? 1 : static_cast<int>(poly.vertices.front().size());
  if (k == 1) return out;
  const double scale = 1.0 + diameter_of(poly);
  std::vector<std::vector<std::size_t>> facets;
  for (std::size_t a = 0; a < poly.normals.size(); ++a) {
    std::vector<std::size_t> on;
    for (std::size_t v = 0; v < poly.vertices.size(); ++v)
      if (std::abs(poly.normals[a].dot(poly.vertices[v]) - poly.offsets[a]) <= 1e-9 * scale) on.push_back(v);
    if (static_cast<int>(on.size()) >= k) facets.push_back(std::move(on));
  }
  std::size_t pairs = 0;
  for (const auto& f : facets) pairs += f.size() * (f.size() - 1) / 2;
  const int remaining = std::max(0, n - static_cast<int>(out.size()));
  const int per_pair = pairs == 0 ? 0 : std::max(1, remaining / static_cast<int>(pairs));
  for (const auto& f : facets)
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j)
        segment_interior(poly.vertices[f[i]], poly.vertices[f[j]], per_pair, out);
  return out;
}

std::vector<Vec> cap_samples(const Cap& c, int n) {
  const int k = static_cast<int>(c.center.size());
  std::vector<Vec> out;
  const Vec plane_point = c.center + c.threshold * c.direction;
  if (k == 1) {
    out.push_back(plane_point);
    out.push_back(c.center + c.radius * c.direction);
    return out;
  }
  const double rim = cap_rim_radius(c);
  const int n_arc = std::max(2, n / 2);
  const int n_flat = std::max(1, n - n_arc);
  if (k == 2) {
    const Vec perp = any_orthogonal(c.direction);
    const double alpha = std::acos(std::clamp(c.threshold / c.radius, -1.0, 1.0));
    for (int i = 0; i < n_arc; ++i) {
      const double a = -alpha + 2.0 * alpha * static_cast<double>(i) / static_cast<double>(n_arc - 1);
      out.push_back(c.center + c.radius * (std::cos(a) * c.direction + std::sin(a) * perp));
    }
    segment_interior(plane_point - rim * perp, plane_point + rim * perp, n_flat, out);
    return out;
  }
  for (const auto& u : unit_directions(k, 4 * n)) {
    if (static_cast<int>(out.size()) >= n_arc) break;
    if (c.radius * c.direction.dot(u) >= c.threshold) out.push_back(c.center + c.radius * u);
  }
  const int rings = 3;
  const int per_ring = std::max(1, n_flat / rings);
  int emitted = 0;
  for (const auto& u : unit_directions(k, 4 * per_ring)) {
    Vec w = u - c.direction * c.direction.dot(u);
    if (w.norm() < 1e-6) continue;
    w /= w.norm();
    for (int r = 1; r <= rings; ++r) out.push_back(plane_point + rim * (static_cast<double>(r) / rings) * w);
    if (++emitted >= per_ring) break;
  }
  out.push_back(plane_point);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Vec> enumerate_vertices(const std::vector<Vec>& normals, const std::vector<double>& offsets, int dim) {
  std::vector<Vec> vertices;
  const int m = static_cast<int>(normals.size());
  double scale = 1.0;
  for (double b : offsets) scale = std::max(scale, std::abs(b));
  for_each_combination(m, dim, [&](const std::vector<int>& subset) {
    Mat A(dim, dim);
    Vec b(dim);
    for (int i = 0; i < dim; ++i) {
      const auto a = static_cast<std::size_t>(subset[static_cast<std::size_t>(i)]);
      A.row(i) = normals[a].transpose();
      b[i] = offsets[a];
    }
    Eigen::FullPivLU<Mat> lu(A);
    lu.setThreshold(1e-10);
    if (lu.rank() < dim) return;
    const Vec x = lu.solve(b);
    const double tol = 1e-9 * (scale + x.lpNorm<Eigen::Infinity>());
    for (std::size_t a = 0; a < normals.size(); ++a)
      if (normals[a].dot(x) - offsets[a] > tol) return;
    for (const auto& v : vertices)
      if ((v - x).lpNorm<Eigen::Infinity>() <= tol) return;
    vertices.push_back(x);
  });
  return vertices;
}

ConvexSet::ConvexSet(Shape shape) : shape_(std::move(shape)), dim_(dim_of(shape_)), diameter_(diameter_of(shape_)) {}

double ConvexSet::active_tolerance() const { return 1e-9 * std::max(diameter_, 1e-3); }

Vec ConvexSet::project(const Vec& p) const {
  if (p.size() != dim_) throw DomainError("point dimension does not match the set");
  if (!p.allFinite()) throw DomainError("point is not finite");
  return std::visit(overloaded{[&](const Ball& b) { return project_ball(b, p); },
                               [&](const Box& b) { return project_box(b, p); },
                               [&](const Polytope& poly) { return project_polytope(poly, p); },
                               [&](const Ellipsoid& e) { return project_ellipsoid(e, p); },
                               [&](const Cap& c) { return project_cap(c, p); }},
                    shape_);
}

double ConvexSet::distance(const Vec& p) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    if (p.size() != dim_) throw DomainError("point dimension does not match the set");
    return std::max(0.0, (p - b->center).norm() - b->radius);
  }
  return (p - project(p)).norm();
}

double ConvexSet::support_gap(const Vec& p) const {
  if (p.size() != dim_) throw DomainError("point dimension does not match the set");
  if (const auto* b = std::get_if<Ball>(&shape_)) return (p - b->center).norm() - b->radius;
  const double d = distance(p);
  if (d > 0.0) return d;
  return std::visit(overloaded{[&](const Ball&) { return 0.0; },
                               [&](const Box& b) { return box_gap_inside(b, p); },
                               [&](const Polytope& poly) { return polytope_gap_inside(poly, p); },
                               [&](const Ellipsoid& e) { return ellipsoid_gap_inside(e, p); },
                               [&](const Cap& c) { return cap_gap_inside(c, p); }},
                    shape_);
}

std::vector<Vec> ConvexSet::outward_normals(const Vec& v) const {
  const double eps = active_tolerance();
  const double gap = support_gap(v);
  if (std::abs(gap) > eps) {
    throw DomainError("point is not on the boundary (distance " + std::to_string(std::abs(gap)) + " > " +
                      std::to_string(eps) + ")");
  }
  std::vector<Vec> out;
  std::visit(overloaded{[&](const Ball& b) {
                          const Vec d = v - b.center;
                          out.push_back(d / d.norm());
                        },
                        [&](const Box& b) {
                          for (int i = 0; i < dim_; ++i) {
                            if (v[i] - b.upper[i] >= -eps) out.push_back(Vec::Unit(dim_, i));
                            if (b.lower[i] - v[i] >= -eps) out.push_back(-Vec::Unit(dim_, i));
                          }
                        },
                        [&](const Polytope& poly) {
                          for (std::size_t a = 0; a < poly.normals.size(); ++a)
                            if (poly.normals[a].dot(v) - poly.offsets[a] >= -eps) out.push_back(poly.normals[a]);
                        },
                        [&](const Ellipsoid& e) {
                          const Vec g = e.shape * (v - e.center);
                          out.push_back(g / g.norm());
                        },
                        [&](const Cap& c) {
                          const Vec d = v - c.center;
                          if (d.norm() - c.radius >= -eps) out.push_back(d / d.norm());
                          if (c.threshold - c.direction.dot(d) >= -eps) out.push_back(-c.direction);
                        }},
             shape_);
  return out;
}

double ConvexSet::support(const Vec& u) const {
  return std::visit(overloaded{[&](const Ball& b) { return b.center.dot(u) + b.radius * u.norm(); },
                               [&](const Box& b) {
                                 double h = 0.0;
                                 for (int i = 0; i < dim_; ++i) h += std::max(b.lower[i] * u[i], b.upper[i] * u[i]);
                                 return h;
                               },
                               [&](const Polytope& poly) {
                                 double h = -std::numeric_limits<double>::infinity();
                                 for (const auto& v : poly.vertices) h = std::max(h, v.dot(u));
                                 return h;
                               },
                               [&](const Ellipsoid& e) {
                                 const Vec w = e.eigenvectors.transpose() * u;
                                 double q = 0.0;
                                 for (int i = 0; i < dim_; ++i) q += w[i] * w[i] / e.eigenvalues[i];
                                 return e.center.dot(u) + std::sqrt(q);
                               },
                               [&](const Cap& c) { return cap_support(c, u); }},
                    shape_);
}

Vec ConvexSet::reference_point() const {
  return std::visit(overloaded{[](const Ball& b) { return b.center; },
                               [](const Box& b) { return Vec(0.5 * (b.lower + b.upper)); },
                               [&](const Polytope& poly) {
                                 Vec c = Vec::Zero(dim_);
                                 for (const auto& v : poly.vertices) c += v;
                                 return Vec(c / static_cast<double>(poly.vertices.size()));
                               },
                               [](const Ellipsoid& e) { return e.center; },
                               [](const Cap& c) {
                                 return Vec(c.center + 0.5 * (c.threshold + c.radius) * c.direction);
                               }},
                    shape_);
}

std::vector<Vec> ConvexSet::boundary_samples(int n) const {
  return std::visit(overloaded{[&](const Ball& b) {
                                 std::vector<Vec> out;
                                 for (const auto& u : unit_directions(dim_, n)) out.push_back(b.center + b.radius * u);
                                 return out;
                               },
                               [&](const Box& b) { return box_samples(b, n); },
                               [&](const Polytope& poly) { return polytope_samples(poly, n); },
                               [&](const Ellipsoid& e) {
                                 std::vector<Vec> out;
                                 for (const auto& u : unit_directions(dim_, n)) {
                                   Vec w(dim_);
                                   for (int i = 0; i < dim_; ++i) w[i] = u[i] / std::sqrt(e.eigenvalues[i]);
                                   out.push_back(e.center + e.eigenvectors * w);
                                 }
                                 return out;
                               },
                               [&](const Cap& c) { return cap_samples(c, n); }},
                    shape_);
}

std::vector<Vec> unit_directions(int dim, int n) {
  std::vector<Vec> out;
  if (dim == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  n = std::max(n, 4);
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      Vec u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(i);
      Vec u(3);
      u << r * std::cos(a), r * std::sin(a), z;
      out.push_back(u);
    }
    return out;
  }
  // dim == 4: (cos eta e^{i xi1}, sin eta e^{i xi2}) on a lattice.
  const int m = std::max(2, static_cast<int>(std::lround(std::cbrt(static_cast<double>(n)))));
  for (int a = 0; a < m; ++a) {
    const double eta = 0.5 * std::numbers::pi * (static_cast<double>(a) + 0.5) / static_cast<double>(m);
    for (int b = 0; b < m; ++b) {
      const double x1 = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(m);
      for (int c = 0; c < m; ++c) {
        const double x2 = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(m);
        Vec u(4);
        u << std::cos(eta) * std::cos(x1), std::cos(eta) * std::sin(x1), std::sin(eta) * std::cos(x2),
            std::sin(eta) * std::sin(x2);
        out.push_back(u);
      }
    }
  }
  return out;
}

double hausdorff_distance(const ConvexSet& a, const ConvexSet& b) {
  if (a.dim() != b.dim()) throw DomainError("hausdorff_distance: dimension mismatch");
  const int n = a.dim() == 2 ? 64 : a.dim() == 3 ? 128 : 216;
  double h = 0.0;
  for (const auto& u : unit_directions(a.dim(), n)) h = std::max(h, std::abs(a.support(u) - b.support(u)));
  return h;
}

}  // namespace mplab
