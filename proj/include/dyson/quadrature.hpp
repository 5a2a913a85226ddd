#pragma once

#include <vector>

namespace dyson {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
	std::vector<double> x, w;
};

const GaussRule& gauss_legendre(int n);

// Append n-point panels covering [a, b] split into `panels` equal pieces.
void append_panels(double a, double b, int panels, int n, std::vector<double>& z, std::vector<double>& w);

}  // namespace dyson
