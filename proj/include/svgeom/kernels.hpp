#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision vector kernels used by the tensor code.
//
// Every kernel has a scalar reference implementation; AVX2+FMA (x86-64) and
// NEON (aarch64) variants are compiled alongside and picked at runtime. The
// environment variable SVGEOM_SIMD=scalar forces the reference path.

namespace svgeom::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);

/// Backend chosen at first use (CPU detection plus the SVGEOM_SIMD override).
Backend active_backend();

/// All backends usable on this machine, scalar first.
std::span<const Backend> available_backends();

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// x *= alpha
void scale(double alpha, std::span<double> x);

// Explicit-backend entry points, used by the equivalence tests.
double dot(Backend b, std::span<const double> a, std::span<const double> c);
double squared_norm(Backend b, std::span<const double> a);
void axpy(Backend b, double alpha, std::span<const double> x, std::span<double> y);
void scale(Backend b, double alpha, std::span<double> x);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace svgeom::kernels
