#pragma once

#include "mplab/geometry.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mplab::testing {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline TimeVec consts(std::initializer_list<double> xs) {
  TimeVec out;
  for (double x : xs) out.push_back(TimeFn::constant(x));
  return out;
}

inline TimeVec consts(const Vec& v) {
  TimeVec out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(TimeFn::constant(v[i]));
  return out;
}

inline Vec gaussian(std::mt19937_64& rng, int k, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(k);
  for (int i = 0; i < k; ++i) v[i] = n(rng);
  return v;
}

inline Vec unit(std::mt19937_64& rng, int k) {
  Vec v = gaussian(rng, k);
  while (v.norm() < 1e-6) v = gaussian(rng, k);
  return v / v.norm();
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Random bounded polytope containing the origin: random unit normals, offsets in [0.5, 1.5],
/// retried until bounded.
inline PolytopeSpec random_polytope(std::mt19937_64& rng, int k) {
  for (;;) {
    PolytopeSpec spec;
    const int m = k + 1 + static_cast<int>(rng() % 6);
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (int a = 0; a < m; ++a) {
      const Vec n = unit(rng, k) * uniform(rng, 0.5, 2.0);
      const double b = uniform(rng, 0.5, 1.5) * n.norm();
      spec.constraints.push_back({consts(n), TimeFn::constant(b)});
    }
    try {
      ConvexFamily probe(spec, {0.0, 1.0});
      return spec;
    } catch (const DomainError&) {
    }
  }
}

inline BoxSpec random_box(std::mt19937_64& rng, int k) {
  Vec lo(k), hi(k);
  for (int i = 0; i < k; ++i) {
    lo[i] = uniform(rng, -2.0, 0.0);
    hi[i] = lo[i] + uniform(rng, 0.2, 2.0);
  }
  return {consts(lo), consts(hi)};
}

inline BallSpec random_ball(std::mt19937_64& rng, int k) {
  return {consts(gaussian(rng, k, 0.5)), TimeFn::constant(uniform(rng, 0.3, 2.0))};
}

inline EllipsoidSpec random_ellipsoid(std::mt19937_64& rng, int k) {
  Mat a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
  const Mat q = a * a.transpose() + 0.3 * Mat::Identity(k, k);
  EllipsoidSpec spec;
  spec.center = consts(gaussian(rng, k, 0.5));
  for (int i = 0; i < k; ++i) {
    TimeVec row;
    for (int j = 0; j < k; ++j) row.push_back(TimeFn::constant(q(i, j)));
    spec.shape.push_back(row);
  }
  return spec;
}

inline CapSpec random_cap(std::mt19937_64& rng, int k) {
  const double r = uniform(rng, 0.5, 2.0);
  return {consts(gaussian(rng, k, 0.5)), TimeFn::constant(r), consts(unit(rng, k)),
          TimeFn::constant(uniform(rng, -0.8, 0.8) * r)};
}

}  // namespace mplab::testing
