#include "xorq/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define XORQ_AVX2 __attribute__((target("avx2,fma")))
#endif

namespace xorq::kernels::avx2 {

#if defined(XORQ_AVX2)

namespace {

XORQ_AVX2 double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

XORQ_AVX2 double dot(const double *a, const double *b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

XORQ_AVX2 std::complex<double> dot_conj(const std::complex<double> *a,
                                        const std::complex<double> *b, std::size_t n) {
  // Two complex numbers per register as [re0, im0, re1, im1].
  const double *pa = reinterpret_cast<const double *>(a);
  const double *pb = reinterpret_cast<const double *>(b);
  __m256d same = _mm256_setzero_pd();  // ar*br, ai*bi
  __m256d swap = _mm256_setzero_pd();  // ar*bi, ai*br
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    same = _mm256_fmadd_pd(va, vb, same);
    swap = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), swap);
  }
  double re = hsum(same);
  alignas(32) double t[4];
  _mm256_store_pd(t, swap);
  double im = (t[0] - t[1]) + (t[2] - t[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

#else

double dot(const double *a, const double *b, std::size_t n) { return scalar::dot(a, b, n); }

std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n) {
  return scalar::dot_conj(a, b, n);
}

#endif

}  // namespace xorq::kernels::avx2
