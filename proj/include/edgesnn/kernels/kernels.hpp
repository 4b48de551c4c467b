#pragma once
// Data-parallel inner loops of the spiking network.
//
// Every kernel has a scalar reference and, where the build target allows it,
// an AVX2 (x86-64) or NEON (aarch64) variant. Variants are selected once at
// runtime. All variants perform the same IEEE operations in the same order per
// element (no fused multiply-add), so their results are bit-identical to the
// scalar reference. Simulation output therefore does not depend on the host ISA.
//
// Set EDGESNN_ISA=scalar|avx2|neon to force a variant.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace edgesnn::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct LifKernelParams {
  double v_rest;
  double v_reset;
  double v_th;
  double r_m;
  double tau_m;
  double dt;
};

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= factor
  void (*scale)(double factor, double* x, std::size_t n);
  // One Euler step for every neuron with now >= refractory_until[i]:
  //   v <- v + dt * (-(v - v_rest) + r_m * current) / tau_m
  // then v >= v_th resets to v_reset and sets spiked[i] = 1.
  // Refractory neurons keep v and get spiked[i] = 0.
  void (*lif_update)(const LifKernelParams& p, double now, double* v, const double* current,
                     const double* refractory_until, std::uint8_t* spiked, std::size_t n);
  // w[i] <- clamp(w[i] + gain * e[i], lo, hi); e[i] <- 0
  void (*reward_update)(double gain, double lo, double hi, double* w, double* e, std::size_t n);
};

bool supported(Isa isa) noexcept;

// Throws std::invalid_argument when `isa` is not available on this host.
const KernelTable& table(Isa isa);

// Widest supported ISA, or the one named by EDGESNN_ISA.
Isa selected_isa();

const KernelTable& active();

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}

inline void scale(double factor, std::span<double> x) { active().scale(factor, x.data(), x.size()); }

inline void lif_update(const LifKernelParams& p, double now, std::span<double> v, std::span<const double> current,
                       std::span<const double> refractory_until, std::span<std::uint8_t> spiked) {
  active().lif_update(p, now, v.data(), current.data(), refractory_until.data(), spiked.data(), v.size());
}

inline void reward_update(double gain, double lo, double hi, std::span<double> w, std::span<double> e) {
  active().reward_update(gain, lo, hi, w.data(), e.data(), w.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace edgesnn::kernels
