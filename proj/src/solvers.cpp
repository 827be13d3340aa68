#include "memopt/solvers.hpp"

#include <cmath>
#include <string>

#include "memopt/errors.hpp"
#include "memopt/kernels.hpp"

namespace memopt {

PcgResult solve_spd(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                    double rel_tol, int max_iterations) {
  const int n = a.rows;
  if (a.cols != n || static_cast<int>(b.size()) != n)
    throw StructuralError("solve_spd: dimension mismatch");
  x.assign(n, 0.0);

  std::vector<double> diag = a.diagonal();
  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0)) throw SolverError("solve_spd: non-positive diagonal entry");
    inv_diag[i] = 1.0 / diag[i];
  }

  std::vector<double> r = b, z(n), p(n), ap(n);
  double bnorm = std::sqrt(kernels::dot(b.data(), b.data(), n));
  if (bnorm == 0.0) return {0, 0.0};
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n);

  int cap = max_iterations > 0 ? max_iterations : 10 * n;
  for (int it = 1; it <= cap; ++it) {
    a.multiply(p.data(), ap.data());
    double pap = kernels::dot(p.data(), ap.data(), n);
    if (!(pap > 0.0)) throw SolverError("solve_spd: matrix is not positive definite");
    double alpha = rz / pap;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, ap.data(), r.data(), n);
    double rnorm = std::sqrt(kernels::dot(r.data(), r.data(), n));
    if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    double rz_next = kernels::dot(r.data(), z.data(), n);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("solve_spd: no convergence in " + std::to_string(cap) + " iterations");
}

void lu_solve(DenseMatrix& a, std::vector<double>& b) {
  const int n = a.n;
  if (a.m != n || static_cast<int>(b.size()) != n)
    throw StructuralError("lu_solve: dimension mismatch");
  std::vector<int> piv(n);
  for (int k = 0; k < n; ++k) {
    int pr = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        pr = i;
      }
    }
    if (!(best > 1e-300)) throw SolverError("lu_solve: singular matrix");
    piv[k] = pr;
    if (pr != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
      std::swap(b[k], b[pr]);
    }
    double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k) * inv;
      if (f == 0.0) continue;
      a(i, k) = f;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
    b[i] = s / a(i, i);
  }
}

}  // namespace memopt
