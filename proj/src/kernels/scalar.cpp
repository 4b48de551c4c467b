#include <algorithm>

#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::kernels::detail {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_scalar(double factor, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * factor;
}

void lif_update_scalar(const LifKernelParams& p, double now, double* v, const double* current,
                       const double* refractory_until, std::uint8_t* spiked, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (now < refractory_until[i]) {
      spiked[i] = 0;
      continue;
    }
    const double leak = v[i] - p.v_rest;
    const double drive = p.r_m * current[i];
    const double vi = v[i] + (p.dt * (drive - leak)) / p.tau_m;
    if (vi >= p.v_th) {
      v[i] = p.v_reset;
      spiked[i] = 1;
    } else {
      v[i] = vi;
      spiked[i] = 0;
    }
  }
}

void reward_update_scalar(double gain, double lo, double hi, double* w, double* e, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::min(std::max(w[i] + gain * e[i], lo), hi);
    e[i] = 0.0;
  }
}

}  // namespace

const KernelTable scalar_table{
    .isa = Isa::scalar,
    .axpy = axpy_scalar,
    .scale = scale_scalar,
    .lif_update = lif_update_scalar,
    .reward_update = reward_update_scalar,
};

}  // namespace edgesnn::kernels::detail
