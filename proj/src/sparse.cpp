#include "memopt/sparse.hpp"

#include <algorithm>
#include <numeric>

#include "memopt/errors.hpp"
#include "memopt/kernels.hpp"

namespace memopt {

CsrMatrix CsrMatrix::from_triplets(const TripletList& t) {
  CsrMatrix m;
  m.rows = t.rows;
  m.cols = t.cols;
  m.row_ptr.assign(t.rows + 1, 0);

  std::vector<int> order(t.i.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return t.i[a] != t.i[b] ? t.i[a] < t.i[b] : t.j[a] < t.j[b];
  });

  for (std::size_t k = 0; k < order.size(); ++k) {
    int idx = order[k];
    if (t.i[idx] < 0 || t.i[idx] >= t.rows || t.j[idx] < 0 || t.j[idx] >= t.cols)
      throw StructuralError("triplet index out of range");
    if (!m.col.empty() && t.i[idx] == t.i[order[k - 1]] && t.j[idx] == t.j[order[k - 1]]) {
      m.val.back() += t.v[idx];
    } else {
      m.col.push_back(t.j[idx]);
      m.val.push_back(t.v[idx]);
      ++m.row_ptr[t.i[idx] + 1];
    }
  }
  for (int r = 0; r < t.rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

void CsrMatrix::multiply(const double* x, double* y) const {
  kernels::csr_spmv(rows, row_ptr.data(), col.data(), val.data(), x, y);
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols) throw StructuralError("spmv: size mismatch");
  std::vector<double> y(rows);
  multiply(x.data(), y.data());
  return y;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col[k] == r) d[r] = val[k];
  return d;
}

}  // namespace memopt
