#include "twistchain/kernels.hpp"

#include <atomic>

namespace tc::kernels {

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

void scale_into_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

std::atomic<int>& isa_slot() {
  static std::atomic<int> slot{cpu_has_avx2() ? 1 : 0};
  return slot;
}

}  // namespace

Isa active_isa() { return isa_slot().load(std::memory_order_relaxed) ? Isa::Avx2 : Isa::Scalar; }

void force_isa(Isa isa) {
  const bool avx = isa == Isa::Avx2 && cpu_has_avx2();
  isa_slot().store(avx ? 1 : 0, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  if (active_isa() == Isa::Avx2)
    axpy_avx2(n, a, x, y);
  else
    axpy_scalar(n, a, x, y);
}

void scale_into(std::size_t n, cplx a, const cplx* x, cplx* y) {
  if (active_isa() == Isa::Avx2)
    scale_into_avx2(n, a, x, y);
  else
    scale_into_scalar(n, a, x, y);
}

}  // namespace tc::kernels
