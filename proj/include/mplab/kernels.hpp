#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

// Data-parallel inner loops. Every kernel exists twice: a serial reference (kernels::serial) and an
// OpenMP version (kernels::omp). Both perform the same floating-point operations per element in
// the same order, so their results are bitwise identical; tests rely on that.
namespace mplab::kernels {

enum class Exec { serial, parallel };

/// Node-major storage: value of component c at node (ix, iy) is data[(ix + nx * iy) * k + c].
struct GridShape {
  int nx = 1;
  int ny = 1;  // 1 on the circle
  int k = 1;

  std::size_t nodes() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t size() const { return nodes() * static_cast<std::size_t>(k); }
};

#define MPLAB_KERNEL_DECLS                                                                                      \
  /* out = wx (in[x+1] - 2 in[x] + in[x-1]) + wy (in[y+1] - 2 in[y] + in[y-1]), periodic */                    \
  void laplacian(const GridShape& g, double wx, double wy, std::span<const double> in, std::span<double> out);   \
  /* out = ux[node] (in[x+1] - in[x-1]) wx + uy[node] (in[y+1] - in[y-1]) wy, periodic */                       \
  void central_gradient(const GridShape& g, std::span<const double> ux, std::span<const double> uy, double wx,   \
                        double wy, std::span<const double> in, std::span<double> out);                          \
  /* out = a + s b */                                                                                           \
  void axpy(double s, std::span<const double> b, std::span<const double> a, std::span<double> out);             \
  /* y += dt/6 (k1 + 2 k2 + 2 k3 + k4) */                                                                       \
  void rk4_combine(double dt, std::span<const double> k1, std::span<const double> k2,                          \
                   std::span<const double> k3, std::span<const double> k4, std::span<double> y);                \
  /* fn(i) for i in [0, n); the exception from the smallest failing index is rethrown */                        \
  void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);                               \
  /* (max value, smallest index attaining it); values must be non-empty */                                       \
  std::pair<double, std::size_t> argmax(std::span<const double> values);                                        \
  /* (min value, smallest index attaining it) */                                                                 \
  std::pair<double, std::size_t> argmin(std::span<const double> values);

namespace serial {
MPLAB_KERNEL_DECLS
}

namespace omp {
MPLAB_KERNEL_DECLS
/// Number of OpenMP threads in use (1 when the runtime has a single core).
int max_threads();
}

#undef MPLAB_KERNEL_DECLS

inline void laplacian(Exec e, const GridShape& g, double wx, double wy, std::span<const double> in,
                      std::span<double> out) {
  e == Exec::serial ? serial::laplacian(g, wx, wy, in, out) : omp::laplacian(g, wx, wy, in, out);
}

inline void central_gradient(Exec e, const GridShape& g, std::span<const double> ux, std::span<const double> uy,
                             double wx, double wy, std::span<const double> in, std::span<double> out) {
  e == Exec::serial ? serial::central_gradient(g, ux, uy, wx, wy, in, out)
                    : omp::central_gradient(g, ux, uy, wx, wy, in, out);
}

inline void axpy(Exec e, double s, std::span<const double> b, std::span<const double> a, std::span<double> out) {
  e == Exec::serial ? serial::axpy(s, b, a, out) : omp::axpy(s, b, a, out);
}

inline void rk4_combine(Exec e, double dt, std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k4, std::span<double> y) {
  e == Exec::serial ? serial::rk4_combine(dt, k1, k2, k3, k4, y) : omp::rk4_combine(dt, k1, k2, k3, k4, y);
}

inline void for_each_index(Exec e, std::size_t n, const std::function<void(std::size_t)>& fn) {
  e == Exec::serial ? serial::for_each_index(n, fn) : omp::for_each_index(n, fn);
}

inline std::pair<double, std::size_t> argmax(Exec e, std::span<const double> values) {
  return e == Exec::serial ? serial::argmax(values) : omp::argmax(values);
}

inline std::pair<double, std::size_t> argmin(Exec e, std::span<const double> values) {
  return e == Exec::serial ? serial::argmin(values) : omp::argmin(values);
}

}  // namespace mplab::kernels
