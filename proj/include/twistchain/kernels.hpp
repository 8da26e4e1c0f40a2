#pragma once

#include <cstddef>

#include "twistchain/types.hpp"

// Complex BLAS-1 style kernels used by the transfer-matrix gate loop.
// Each kernel has a scalar reference and an AVX2/FMA variant; the public
// entry points dispatch on the CPU detected at first use.

namespace tc::kernels {

enum class Isa { Scalar, Avx2 };

// y[i] += a * x[i]
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
// y[i] = a * x[i]
void scale_into(std::size_t n, cplx a, const cplx* x, cplx* y);

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y);
void scale_into_scalar(std::size_t n, cplx a, const cplx* x, cplx* y);
void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y);
void scale_into_avx2(std::size_t n, cplx a, const cplx* x, cplx* y);

bool cpu_has_avx2();
Isa active_isa();
// Overrides runtime detection; requesting Avx2 on a CPU without it falls back to Scalar.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

}  // namespace tc::kernels
