#include "xorq/kernels.hpp"

#include <atomic>

namespace xorq::kernels {

namespace scalar {

double dot(const double *a, const double *b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<int> &isa_slot() {
  static std::atomic<int> slot{static_cast<int>(cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar)};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(isa_slot().load(std::memory_order_relaxed)); }

const char *isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) isa = Isa::Scalar;
  isa_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

double dot(const double *a, const double *b, std::size_t n) {
  return active_isa() == Isa::Avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n) {
  return active_isa() == Isa::Avx2 ? avx2::dot_conj(a, b, n) : scalar::dot_conj(a, b, n);
}

}  // namespace xorq::kernels
