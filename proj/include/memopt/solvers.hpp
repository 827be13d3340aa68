#pragma once

#include <vector>

#include "memopt/sparse.hpp"

namespace memopt {

struct PcgResult {
  int iterations = 0;
  double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Relative
/// tolerance on the residual norm; iteration cap 10 * n (or max_iterations if
/// positive). Throws SolverError on breakdown or non-convergence.
PcgResult solve_spd(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                    double rel_tol = 1e-12, int max_iterations = -1);

/// Dense row-major matrix for small saddle-point systems.
struct DenseMatrix {
  int n = 0, m = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : n(rows), m(cols), a(static_cast<std::size_t>(rows) * cols, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * m + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * m + j]; }
};

/// Solves A x = b by LU with partial pivoting; A is destroyed, b becomes x.
/// Throws SolverError on (numerically) singular A.
void lu_solve(DenseMatrix& a, std::vector<double>& b);

}  // namespace memopt
