#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "memopt/kernels.hpp"
#include "memopt/sparse.hpp"

using namespace memopt;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = uni(rng);
  return v;
}

double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

CsrMatrix random_csr(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  TripletList t(n, n);
  for (int i = 0; i < n; ++i) {
    t.add(i, i, 2.0 + uni(rng));
    for (int k = 0; k < 5; ++k) t.add(i, col(rng), uni(rng));
  }
  return CsrMatrix::from_triplets(t);
}

}  // namespace

TEST_CASE("backend name matches availability") {
  std::string name = kernels::active_backend();
  if (kernels::avx2_available()) {
    CHECK(name == "avx2");
  } else {
    CHECK(name == "scalar");
  }
}

TEST_CASE("scalar dot matches a naive loop for all remainder cases") {
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 64, 1000, 1001}) {
    auto a = random_vector(n, 100 + n), b = random_vector(n, 200 + n);
    double ref = naive_dot(a, b);
    CHECK(kernels::scalar::dot(a.data(), b.data(), n) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(kernels::dot(a.data(), b.data(), n) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("scalar axpy matches a naive loop for all remainder cases") {
  for (std::size_t n : {0, 1, 3, 4, 7, 8, 9, 17, 64, 1000, 1001}) {
    auto x = random_vector(n, 300 + n), y0 = random_vector(n, 400 + n);
    const double alpha = 0.37;
    auto ref = y0;
    for (std::size_t i = 0; i < n; ++i) ref[i] += alpha * x[i];
    auto y1 = y0;
    kernels::scalar::axpy(alpha, x.data(), y1.data(), n);
    auto y2 = y0;
    kernels::axpy(alpha, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y1[i] == doctest::Approx(ref[i]).epsilon(1e-14));
      CHECK(y2[i] == doctest::Approx(ref[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("spmv backends agree with a dense product") {
  for (int n : {1, 2, 7, 33, 200}) {
    CsrMatrix a = random_csr(n, 17 + n);
    auto x = random_vector(n, 500 + n);
    // dense reference
    std::vector<double> ref(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) ref[i] += a.val[k] * x[a.col[k]];
    std::vector<double> y1(n), y2(n);
    kernels::scalar::csr_spmv(n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(),
                              y1.data());
    kernels::csr_spmv(n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(), y2.data());
    for (int i = 0; i < n; ++i) {
      CHECK(y1[i] == doctest::Approx(ref[i]).epsilon(1e-13));
      CHECK(y2[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    }
  }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!kernels::avx2_available()) return;
  for (std::size_t n : {1, 3, 4, 7, 8, 9, 16, 17, 1000, 1001}) {
    auto a = random_vector(n, 600 + n), b = random_vector(n, 700 + n);
    CHECK(kernels::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::dot(a.data(), b.data(), n)).epsilon(1e-13));
    auto y1 = b, y2 = b;
    kernels::scalar::axpy(1.7, a.data(), y1.data(), n);
    kernels::avx2::axpy(1.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));
  }
  int n = 123;
  CsrMatrix m = random_csr(n, 900);
  auto x = random_vector(n, 901);
  std::vector<double> y1(n), y2(n);
  kernels::scalar::csr_spmv(n, m.row_ptr.data(), m.col.data(), m.val.data(), x.data(), y1.data());
  kernels::avx2::csr_spmv(n, m.row_ptr.data(), m.col.data(), m.val.data(), x.data(), y2.data());
  for (int i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-13));
}
#endif
