#include <arm_neon.h>

#include <algorithm>

#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::kernels::detail {
namespace {

constexpr std::size_t kLanes = 2;

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_neon(double factor, double* x, std::size_t n) {
  const float64x2_t vf = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), vf));
  for (; i < n; ++i) x[i] = x[i] * factor;
}

void lif_update_neon(const LifKernelParams& p, double now, double* v, const double* current,
                     const double* refractory_until, std::uint8_t* spiked, std::size_t n) {
  const float64x2_t v_rest = vdupq_n_f64(p.v_rest);
  const float64x2_t v_reset = vdupq_n_f64(p.v_reset);
  const float64x2_t v_th = vdupq_n_f64(p.v_th);
  const float64x2_t r_m = vdupq_n_f64(p.r_m);
  const float64x2_t tau_m = vdupq_n_f64(p.tau_m);
  const float64x2_t dt = vdupq_n_f64(p.dt);
  const float64x2_t vnow = vdupq_n_f64(now);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t v_old = vld1q_f64(v + i);
    const uint64x2_t refractory = vcltq_f64(vnow, vld1q_f64(refractory_until + i));
    const float64x2_t leak = vsubq_f64(v_old, v_rest);
    const float64x2_t drive = vmulq_f64(r_m, vld1q_f64(current + i));
    const float64x2_t step = vdivq_f64(vmulq_f64(dt, vsubq_f64(drive, leak)), tau_m);
    const float64x2_t v_new = vaddq_f64(v_old, step);
    const uint64x2_t fired = vbicq_u64(vcgeq_f64(v_new, v_th), refractory);
    float64x2_t v_out = vbslq_f64(refractory, v_old, v_new);
    v_out = vbslq_f64(fired, v_reset, v_out);
    vst1q_f64(v + i, v_out);
    spiked[i] = static_cast<std::uint8_t>(vgetq_lane_u64(fired, 0) & 1);
    spiked[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(fired, 1) & 1);
  }
  for (; i < n; ++i) {
    if (now < refractory_until[i]) {
      spiked[i] = 0;
      continue;
    }
    const double vi = v[i] + (p.dt * (p.r_m * current[i] - (v[i] - p.v_rest))) / p.tau_m;
    spiked[i] = vi >= p.v_th ? 1 : 0;
    v[i] = spiked[i] ? p.v_reset : vi;
  }
}

void reward_update_neon(double gain, double lo, double hi, double* w, double* e, std::size_t n) {
  const float64x2_t vg = vdupq_n_f64(gain);
  const float64x2_t vlo = vdupq_n_f64(lo);
  const float64x2_t vhi = vdupq_n_f64(hi);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t upd = vaddq_f64(vld1q_f64(w + i), vmulq_f64(vg, vld1q_f64(e + i)));
    vst1q_f64(w + i, vminq_f64(vmaxq_f64(upd, vlo), vhi));
    vst1q_f64(e + i, vdupq_n_f64(0.0));
  }
  for (; i < n; ++i) {
    w[i] = std::min(std::max(w[i] + gain * e[i], lo), hi);
    e[i] = 0.0;
  }
}

}  // namespace

const KernelTable neon_table{
    .isa = Isa::neon,
    .axpy = axpy_neon,
    .scale = scale_neon,
    .lif_update = lif_update_neon,
    .reward_update = reward_update_neon,
};

}  // namespace edgesnn::kernels::detail
