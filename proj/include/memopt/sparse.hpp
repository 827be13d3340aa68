#pragma once

#include <vector>

namespace memopt {

/// Coordinate-format accumulator for assembly; duplicates are summed on
/// conversion to CSR.
struct TripletList {
  int rows = 0, cols = 0;
  std::vector<int> i, j;
  std::vector<double> v;

  TripletList() = default;
  TripletList(int r, int c) : rows(r), cols(c) {}

  void add(int row, int col, double value) {
    i.push_back(row);
    j.push_back(col);
    v.push_back(value);
  }
};

struct CsrMatrix {
  int rows = 0, cols = 0;
  std::vector<int> row_ptr;  // size rows + 1
  std::vector<int> col;
  std::vector<double> val;

  static CsrMatrix from_triplets(const TripletList& t);

  /// y = A x (dispatched kernel).
  void multiply(const double* x, double* y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;
};

}  // namespace memopt
