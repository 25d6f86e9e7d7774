#pragma once

// Inner-product kernels used by the Frobenius pairings in linalg, the bias
// evaluator and the interior-point solver. Each kernel has a scalar
// reference and an AVX2 variant; the variant is picked once at runtime.

#include <complex>
#include <cstddef>

namespace xorq::kernels {

enum class Isa { Scalar, Avx2 };

// ISA selected for this process (AVX2 when the CPU reports avx2 and fma).
Isa active_isa();
const char *isa_name(Isa isa);
// Overrides the runtime choice; requesting an unsupported ISA falls back to scalar.
void force_isa(Isa isa);
bool isa_supported(Isa isa);

// sum_i a[i] * b[i]
double dot(const double *a, const double *b, std::size_t n);
// sum_i conj(a[i]) * b[i]
std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n);

namespace scalar {
double dot(const double *a, const double *b, std::size_t n);
std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double *a, const double *b, std::size_t n);
std::complex<double> dot_conj(const std::complex<double> *a, const std::complex<double> *b,
                              std::size_t n);
}  // namespace avx2

}  // namespace xorq::kernels
