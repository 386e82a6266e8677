#ifndef RNND_SRC_SIMD_KERNELS_INTERNAL_H_
#define RNND_SRC_SIMD_KERNELS_INTERNAL_H_

#include "rnnd/simd/kernels.h"

namespace rnnd::simd {

// Defined only in the translation units built for the matching target.
#if defined(RNND_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif
#if defined(RNND_HAVE_NEON)
const Kernels& neon_kernels();
#endif

}  // namespace rnnd::simd

#endif  // RNND_SRC_SIMD_KERNELS_INTERNAL_H_
