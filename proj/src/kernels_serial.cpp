#include "mplab/kernels.hpp"

#include <stdexcept>

namespace mplab::kernels::serial {

void laplacian(const GridShape& g, double wx, double wy, std::span<const double> in, std::span<double> out) {
  const int k = g.k;
  for (int iy = 0; iy < g.ny; ++iy) {
    const int up = (iy + 1) % g.ny;
    const int dn = (iy + g.ny - 1) % g.ny;
    for (int ix = 0; ix < g.nx; ++ix) {
      const int rt = (ix + 1) % g.nx;
      const int lt = (ix + g.nx - 1) % g.nx;
      const std::size_t c0 = static_cast<std::size_t>(ix + g.nx * iy) * k;
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
}

void central_gradient(const GridShape& g, std::span<const double> ux, std::span<const double> uy, double wx,
                      double wy, std::span<const double> in, std::span<double> out) {
  const int k = g.k;
  for (int iy = 0; iy < g.ny; ++iy) {
    const int up = (iy + 1) % g.ny;
    const int dn = (iy + g.ny - 1) % g.ny;
    for (int ix = 0; ix < g.nx; ++ix) {
      const int rt = (ix + 1) % g.nx;
      const int lt = (ix + g.nx - 1) % g.nx;
      const std::size_t node = static_cast<std::size_t>(ix + g.nx * iy);
      const std::size_t c0 = node * k;
      const std::size_t cr = static_cast<std::size_t>(rt + g.nx * iy) * k;
      const std::size_t cl = static_cast<std::size_t>(lt + g.nx * iy) * k;
      const std::size_t cu = static_cast<std::size_t>(ix + g.nx * up) * k;
      const std::size_t cd = static_cast<std::size_t>(ix + g.nx * dn) * k;
      for (int c = 0; c < k; ++c) {
        double acc = ux[node] * ((in[cr + c] - in[cl + c]) * wx);
        if (g.ny > 1) acc += uy[node] * ((in[cu + c] - in[cd + c]) * wy);
        out[c0 + c] = acc;
      }
    }
  }
}

void axpy(double s, std::span<const double> b, std::span<const double> a, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + s * b[i];
}

void rk4_combine(double dt, std::span<const double> k1, std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, std::span<double> y) {
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * (((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i]);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

std::pair<double, std::size_t> argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return {values[best], best};
}

std::pair<double, std::size_t> argmin(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmin of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return {values[best], best};
}

}  // namespace mplab::kernels::serial
