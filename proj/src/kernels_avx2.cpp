#include "twistchain/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define TC_HAVE_X86 1
#else
#define TC_HAVE_X86 0
#endif

namespace tc::kernels {

#if TC_HAVE_X86

// Two complex doubles per register: [re0, im0, re1, im1].
// a*x = fmaddsub(ar, x, ai * swap(x)) gives [ar*xr - ai*xi, ar*xi + ai*xr, ...].

__attribute__((target("avx2,fma"))) void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
    __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0b0101)));
    __m256d p1 = _mm256_fmaddsub_pd(ar, x1, _mm256_mul_pd(ai, _mm256_permute_pd(x1, 0b0101)));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
    _mm256_storeu_pd(yp + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i + 4), p1));
  }
  for (; i + 2 <= n; i += 2) {
    __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0b0101)));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
  }
  if (i < n) axpy_scalar(n - i, a, x + i, y + i);
}

__attribute__((target("avx2,fma"))) void scale_into_avx2(std::size_t n, cplx a, const cplx* x,
                                                         cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i,
                     _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0b0101))));
  }
  if (i < n) scale_into_scalar(n - i, a, x + i, y + i);
}

#else

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) { axpy_scalar(n, a, x, y); }
void scale_into_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  scale_into_scalar(n, a, x, y);
}

#endif

}  // namespace tc::kernels
