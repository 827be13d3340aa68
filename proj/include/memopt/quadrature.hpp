#pragma once

#include <array>
#include <vector>

namespace memopt {

enum class QuadDomain { Triangle, Segment };

/// Quadrature rule on the reference triangle {x,y >= 0, x+y <= 1} or the
/// reference segment [0,1]. Segment rules use points[i][0] only. All weights
/// are positive and sum to the reference measure (1/2 resp. 1).
struct QuadratureRule {
  QuadDomain domain;
  int degree;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Rule exact for polynomials up to `degree` (degree <= 10).
QuadratureRule quadrature(QuadDomain domain, int degree);

/// Gauss-Legendre nodes/weights on [0,1], exact up to degree 2n-1.
void gauss_legendre_unit(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace memopt
