// Compiled with -mavx2 only; callers reach these through the dispatch table
// after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_avx2(double factor, double* x, std::size_t n) {
  const __m256d vf = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vf));
  for (; i < n; ++i) x[i] = x[i] * factor;
}

void lif_update_avx2(const LifKernelParams& p, double now, double* v, const double* current,
                     const double* refractory_until, std::uint8_t* spiked, std::size_t n) {
  const __m256d v_rest = _mm256_set1_pd(p.v_rest);
  const __m256d v_reset = _mm256_set1_pd(p.v_reset);
  const __m256d v_th = _mm256_set1_pd(p.v_th);
  const __m256d r_m = _mm256_set1_pd(p.r_m);
  const __m256d tau_m = _mm256_set1_pd(p.tau_m);
  const __m256d dt = _mm256_set1_pd(p.dt);
  const __m256d vnow = _mm256_set1_pd(now);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v_old = _mm256_loadu_pd(v + i);
    const __m256d refractory = _mm256_cmp_pd(vnow, _mm256_loadu_pd(refractory_until + i), _CMP_LT_OQ);
    const __m256d leak = _mm256_sub_pd(v_old, v_rest);
    const __m256d drive = _mm256_mul_pd(r_m, _mm256_loadu_pd(current + i));
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(dt, _mm256_sub_pd(drive, leak)), tau_m);
    const __m256d v_new = _mm256_add_pd(v_old, step);
    const __m256d fired = _mm256_andnot_pd(refractory, _mm256_cmp_pd(v_new, v_th, _CMP_GE_OQ));
    __m256d v_out = _mm256_blendv_pd(v_new, v_old, refractory);
    v_out = _mm256_blendv_pd(v_out, v_reset, fired);
    _mm256_storeu_pd(v + i, v_out);
    const int bits = _mm256_movemask_pd(fired);
    for (std::size_t k = 0; k < kLanes; ++k) spiked[i + k] = static_cast<std::uint8_t>((bits >> k) & 1);
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

void reward_update_avx2(double gain, double lo, double hi, double* w, double* e, std::size_t n) {
  const __m256d vg = _mm256_set1_pd(gain);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d upd = _mm256_add_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(vg, _mm256_loadu_pd(e + i)));
    // max(x, lo) then min(., hi) with the same operand order as std::max/std::min on non-NaN input.
    _mm256_storeu_pd(w + i, _mm256_min_pd(_mm256_max_pd(upd, vlo), vhi));
    _mm256_storeu_pd(e + i, zero);
  }
  for (; i < n; ++i) {
    w[i] = std::min(std::max(w[i] + gain * e[i], lo), hi);
    e[i] = 0.0;
  }
}

}  // namespace

const KernelTable avx2_table{
    .isa = Isa::avx2,
    .axpy = axpy_avx2,
    .scale = scale_avx2,
    .lif_update = lif_update_avx2,
    .reward_update = reward_update_avx2,
};

}  // namespace edgesnn::kernels::detail
