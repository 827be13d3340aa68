#pragma once

#include <cstddef>

namespace memopt::kernels {

/// Name of the backend selected at startup: "avx2" or "scalar".
const char* active_backend();
bool avx2_available();

/// Dispatched entry points (scalar reference or AVX2, chosen at runtime).
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(int nrows, const int* row_ptr, const int* cols, const double* vals, const double* x,
              double* y);

/// Reference implementations, always available (used for equivalence testing).
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(int nrows, const int* row_ptr, const int* cols, const double* vals, const double* x,
              double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(int nrows, const int* row_ptr, const int* cols, const double* vals, const double* x,
              double* y);
}  // namespace avx2
#endif

}  // namespace memopt::kernels
