#include "svgeom/kernels.hpp"

#include <array>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SVGEOM_HAVE_X86 1
#else
#define SVGEOM_HAVE_X86 0
#endif

#if defined(__aarch64__)
#include <arm_neon.h>
#define SVGEOM_HAVE_NEON 1
#else
#define SVGEOM_HAVE_NEON 0
#endif

namespace svgeom::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace scalar

#if SVGEOM_HAVE_X86
namespace avx2 {

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b,
                                               std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) void axpy(double alpha, const double* x, double* y,
                                              std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void scale(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace avx2
#endif

#if SVGEOM_HAVE_NEON
namespace neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_n_f64(vld1q_f64(x + i), alpha));
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace neon
#endif

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
};

Table table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return {scalar::dot, scalar::axpy, scalar::scale};
    case Backend::avx2:
#if SVGEOM_HAVE_X86
      return {avx2::dot, avx2::axpy, avx2::scale};
#else
      break;
#endif
    case Backend::neon:
#if SVGEOM_HAVE_NEON
      return {neon::dot, neon::axpy, neon::scale};
#else
      break;
#endif
  }
  throw std::invalid_argument("SIMD backend not available on this machine");
}

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if SVGEOM_HAVE_X86
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
      return SVGEOM_HAVE_NEON != 0;
  }
  return false;
}

Backend detect() {
  if (const char* env = std::getenv("SVGEOM_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::scalar;
  }
  if (cpu_has(Backend::avx2)) return Backend::avx2;
  if (cpu_has(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

const Table& active_table() {
  static const Table t = table_for(active_backend());
  return t;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

std::span<const Backend> available_backends() {
  static const std::vector<Backend> list = [] {
    std::vector<Backend> v;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (cpu_has(b)) v.push_back(b);
    }
    return v;
  }();
  return list;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active_table().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return active_table().dot(a.data(), a.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  active_table().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) {
  active_table().scale(alpha, x.data(), x.size());
}

double dot(Backend b, std::span<const double> a, std::span<const double> c) {
  check_sizes(a.size(), c.size());
  return table_for(b).dot(a.data(), c.data(), a.size());
}

double squared_norm(Backend b, std::span<const double> a) {
  return table_for(b).dot(a.data(), a.data(), a.size());
}

void axpy(Backend b, double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  table_for(b).axpy(alpha, x.data(), y.data(), x.size());
}

void scale(Backend b, double alpha, std::span<double> x) {
  table_for(b).scale(alpha, x.data(), x.size());
}

}  // namespace svgeom::kernels
