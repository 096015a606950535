//============================================================================
// hermite.hpp -- probabilists' Hermite polynomials and Gaussian quadrature
// rules (Gauss--Hermite, Gauss--Legendre) built by Golub--Welsch.
//============================================================================
#pragma once

#include <vector>

#include "kinlab/common.hpp"

namespace kinlab {

// Probabilists' Hermite polynomial He_n(x):
//   He_0 = 1, He_1 = x, He_{n+1} = x He_n - n He_{n-1}.
// Satisfies d^n/dx^n e^{-x^2/2} = (-1)^n He_n(x) e^{-x^2/2}.
double hermite_he(int n, double x);

// Coefficients of He_n in the monomial basis (index = power of x).
std::vector<double> hermite_he_coeffs(int n);

struct Quad1D {
  std::vector<double> x;  // nodes
  std::vector<double> w;  // weights
};

// Gauss--Hermite rule for the weight e^{-x^2} on (-inf, inf):
//   integral e^{-x^2} f(x) dx ~= sum w_i f(x_i).
// Exact for polynomials of degree <= 2n-1.
Quad1D gauss_hermite(int n);

// Nodes/weights for the Gaussian probability weight:
//   integral e^{-x^2/2} f(x) dx ~= sum w_i f(x_i)   (w contains the sqrt(2)
// substitution; no (2 pi)^{-1/2} normalisation is included).
Quad1D gauss_hermite_prob(int n);

// Gauss--Legendre rule on [a, b].
Quad1D gauss_legendre(int n, double a, double b);

}  // namespace kinlab
