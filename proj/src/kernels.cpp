#include "memopt/kernels.hpp"

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace memopt::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void csr_spmv(int nrows, const int* row_ptr, const int* cols, const double* vals, const double* x,
              double* y) {
  for (int r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)

namespace avx2 {

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  double buf[4];
  _mm256_storeu_pd(buf, acc0);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) void axpy(double alpha, const double* x, double* y,
                                              std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void csr_spmv(int nrows, const int* row_ptr, const int* cols,
                                                  const double* vals, const double* x, double* y) {
  for (int r = 0; r < nrows; ++r) {
    int k = row_ptr[r], end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m256d xv = _mm256_set_pd(x[cols[k + 3]], x[cols[k + 2]], x[cols[k + 1]], x[cols[k]]);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    double buf[4];
    _mm256_storeu_pd(buf, acc);
    double s = buf[0] + buf[1] + buf[2] + buf[3];
    for (; k < end; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace avx2

bool avx2_available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

#else

bool avx2_available() { return false; }

#endif

namespace {
const bool kUseAvx2 = avx2_available();
}

const char* active_backend() { return kUseAvx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (kUseAvx2) return avx2::dot(a, b, n);
#endif
  return scalar::dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (kUseAvx2) {
    avx2::axpy(alpha, x, y, n);
    return;
  }
#endif
  scalar::axpy(alpha, x, y, n);
}

void csr_spmv(int nrows, const int* row_ptr, const int* cols, const double* vals, const double* x,
              double* y) {
#if defined(__x86_64__) || defined(_M_X64)
  if (kUseAvx2) {
    avx2::csr_spmv(nrows, row_ptr, cols, vals, x, y);
    return;
  }
#endif
  scalar::csr_spmv(nrows, row_ptr, cols, vals, x, y);
}

}  // namespace memopt::kernels
