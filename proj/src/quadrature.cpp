#include "memopt/quadrature.hpp"

#include <cmath>

#include "memopt/errors.hpp"

namespace memopt {

void gauss_legendre_unit(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n with Chebyshev initial guess, on [-1,1].
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p0 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pm = (n == 1) ? 1.0 : p0;
      pp = n * (x * pn - pm) / (x * x - 1.0);
      double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    points[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

namespace {

QuadratureRule triangle_rule(int degree) {
  QuadratureRule rule{QuadDomain::Triangle, degree, {}, {}};
  if (degree <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
  } else if (degree == 2) {
    rule.points = {{2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}, {1.0 / 6.0, 1.0 / 6.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  } else {
    // Collapsed-square (Duffy) product rule: x = u, y = v(1-u), Jacobian (1-u).
    // The mapped integrand of a degree-d polynomial has degree d+1 in u and d
    // in v, so n Gauss points per direction with 2n-1 >= d+1 are exact.
    int n = (degree + 3) / 2;
    std::vector<double> p, w;
    gauss_legendre_unit(n, p, w);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double u = p[i], v = p[j];
        rule.points.push_back({u, v * (1.0 - u)});
        rule.weights.push_back(w[i] * w[j] * (1.0 - u));
      }
  }
  return rule;
}

QuadratureRule segment_rule(int degree) {
  QuadratureRule rule{QuadDomain::Segment, degree, {}, {}};
  int n = degree / 2 + 1;
  std::vector<double> p, w;
  gauss_legendre_unit(n, p, w);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back({p[i], 0.0});
    rule.weights.push_back(w[i]);
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(QuadDomain domain, int degree) {
  if (degree < 0 || degree > 10) throw ConfigError("quadrature: unsupported degree " + std::to_string(degree));
  return domain == QuadDomain::Triangle ? triangle_rule(degree) : segment_rule(degree);
}

}  // namespace memopt
