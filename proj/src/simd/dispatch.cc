#include <cstdlib>
#include <string_view>

#include "simd/kernels_internal.h"

namespace rnnd::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

const Kernels* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
#if defined(RNND_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &avx2_kernels();
      }
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(RNND_HAVE_NEON)
      return &neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const Kernels& select_kernels() {
  if (const char* forced = std::getenv("RNND_ISA")) {
    if (std::string_view(forced) == "scalar") return scalar_kernels();
  }
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (const Kernels* k = kernels_for(isa)) return *k;
  }
  return scalar_kernels();
}

}  // namespace

const Kernels& active_kernels() {
  static const Kernels& selected = select_kernels();
  return selected;
}

}  // namespace rnnd::simd
