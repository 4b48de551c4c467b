#include <cstdlib>
#include <stdexcept>
#include <string>

#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("kernel ISA not available: " + std::string(to_string(isa)));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: return detail::avx2_table;
#endif
#if defined(__aarch64__)
    case Isa::neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

Isa selected_isa() {
  if (const char* forced = std::getenv("EDGESNN_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
      if (name == to_string(isa) && supported(isa)) return isa;
  }
  if (supported(Isa::avx2)) return Isa::avx2;
  if (supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& active() {
  static const KernelTable& chosen = table(selected_isa());
  return chosen;
}

}  // namespace edgesnn::kernels
