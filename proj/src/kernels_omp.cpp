#include "mplab/kernels.hpp"

#include <omp.h>

#include <exception>
#include <limits>
#include <stdexcept>

namespace mplab::kernels::omp {

int max_threads() { return omp_get_max_threads(); }

void laplacian(const GridShape& g, double wx, double wy, std::span<const double> in, std::span<double> out) {
  const int k = g.k;
  const long n = static_cast<long>(g.nodes());
#pragma omp parallel for schedule(static)
  for (long node = 0; node < n; ++node) {
    const int ix = static_cast<int>(node % g.nx);
    const int iy = static_cast<int>(node / g.nx);
    const int up = (iy + 1) % g.ny;
    const int dn = (iy + g.ny - 1) % g.ny;
    const int rt = (ix + 1) % g.nx;
    const int lt = (ix + g.nx - 1) % g.nx;
    const std::size_t c0 = static_cast<std::size_t>(node) * k;
    const std::size_t cr = static_cast<std::size_t>(rt + g.nx * iy) * k;
    const std::size_t cl = static_cast<std::size_t>(lt + g.nx * iy) * k;
    const std::size_t cu = static_cast<std::size_t>(ix + g.nx * up) * k;
    const std::size_t cd = static_cast<std::size_t>(ix + g.nx * dn) * k;
    for (int c = 0; c < k; ++c) {
      double acc = wx * ((in[cr + c] - 2.0 * in[c0 + c]) + in[cl + c]);
      if (g.ny > 1) acc += wy * ((in[cu + c] - 2.0 * in[c0 + c]) + in[cd + c]);
      out[c0 + c] = acc;
    }
  }
}

void central_gradient(const GridShape& g, std::span<const double> ux, std::span<const double> uy, double wx,
                      double wy, std::span<const double> in, std::span<double> out) {
  const int k = g.k;
  const long n = static_cast<long>(g.nodes());
#pragma omp parallel for schedule(static)
  for (long node = 0; node < n; ++node) {
    const int ix = static_cast<int>(node % g.nx);
    const int iy = static_cast<int>(node / g.nx);
    const int up = (iy + 1) % g.ny;
    const int dn = (iy + g.ny - 1) % g.ny;
    const int rt = (ix + 1) % g.nx;
    const int lt = (ix + g.nx - 1) % g.nx;
    const auto un = static_cast<std::size_t>(node);
    const std::size_t c0 = un * k;
    const std::size_t cr = static_cast<std::size_t>(rt + g.nx * iy) * k;
    const std::size_t cl = static_cast<std::size_t>(lt + g.nx * iy) * k;
    const std::size_t cu = static_cast<std::size_t>(ix + g.nx * up) * k;
    const std::size_t cd = static_cast<std::size_t>(ix + g.nx * dn) * k;
    for (int c = 0; c < k; ++c) {
      double acc = ux[un] * ((in[cr + c] - in[cl + c]) * wx);
      if (g.ny > 1) acc += uy[un] * ((in[cu + c] - in[cd + c]) * wy);
      out[c0 + c] = acc;
    }
  }
}

void axpy(double s, std::span<const double> b, std::span<const double> a, std::span<double> out) {
  const long n = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + s * b[static_cast<std::size_t>(i)];
}

void rk4_combine(double dt, std::span<const double> k1, std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, std::span<double> y) {
  const double w = dt / 6.0;
  const long n = static_cast<long>(y.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    y[i] += w * (((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i]);
  }
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long j = 0; j < count; ++j) {
    const auto i = static_cast<std::size_t>(j);
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(mplab_for_each_index)
      {
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

// Per-thread partial results are combined in thread order; ties resolve to the smallest index,
// so the result matches the serial scan.
std::pair<double, std::size_t> argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  std::pair<double, std::size_t> best{values[0], 0};
  const long n = static_cast<long>(values.size());
#pragma omp parallel
  {
    std::pair<double, std::size_t> local{-std::numeric_limits<double>::infinity(), values.size()};
#pragma omp for schedule(static) nowait
    for (long j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      if (local.second == values.size() || values[i] > local.first) local = {values[i], i};
    }
#pragma omp critical(mplab_argmax)
    {
      if (local.second < values.size() &&
          (local.first > best.first || (local.first == best.first && local.second < best.second)))
        best = local;
    }
  }
  return best;
}

std::pair<double, std::size_t> argmin(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmin of an empty range");
  std::pair<double, std::size_t> best{values[0], 0};
  const long n = static_cast<long>(values.size());
#pragma omp parallel
  {
    std::pair<double, std::size_t> local{std::numeric_limits<double>::infinity(), values.size()};
#pragma omp for schedule(static) nowait
    for (long j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      if (local.second == values.size() || values[i] < local.first) local = {values[i], i};
    }
#pragma omp critical(mplab_argmin)
    {
      if (local.second < values.size() &&
          (local.first < best.first || (local.first == best.first && local.second < best.second)))
        best = local;
    }
  }
  return best;
}

}  // namespace mplab::kernels::omp
