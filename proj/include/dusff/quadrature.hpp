#pragma once

#include <vector>

namespace dusff {

struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for weight e^{-x^2} on the real line (weights sum to
// sqrt(pi)); nodes via Golub-Welsch.
Quadrature1D gauss_hermite(int n);

// Gauss-Legendre rule on [-1, 1] (weights sum to 2).
Quadrature1D gauss_legendre(int n);

}  // namespace dusff
