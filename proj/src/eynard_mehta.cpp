#include "dyson/mc_oracle.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyson {

namespace {

constexpr double kReach = 12.0;  // e^{-x^2} and the Mehler factors are below 1e-60 outside
constexpr double kPanel = 0.5;
constexpr int kNodes = 20;

// Gauss-Legendre nodes on [-kReach, kReach] minus X, with panel breaks at the endpoints
// of X so every piece integrates a smooth function.
void outside_nodes(const std::vector<Interval>& X, std::vector<double>& z, std::vector<double>& w) {
	std::vector<Interval> ivs(X);
	std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.a < b.a; });
	double at = -kReach;
	auto piece = [&](double a, double b) {
		a = std::max(a, -kReach);
		b = std::min(b, kReach);
		if (b <= a) return;
		append_panels(a, b, std::max(1, int(std::ceil((b - a) / kPanel))), kNodes, z, w);
	};
	for (const Interval& iv : ivs) {
		piece(at, iv.a);
		at = std::max(at, iv.b);
	}
	piece(at, kReach);
}

// Orthonormal Hermite polynomials of degree 0 and 1 for the weight e^{-x^2}.
void hermite_poly(int, double x, double* p) {
	p[0] = std::pow(M_PI, -0.25);
	p[1] = std::sqrt(2.0) * x * p[0];
}

Eigen::MatrixXd moment_matrix(int n, const std::vector<double>& tau, const std::vector<std::vector<Interval>>& X) {
	int m = int(tau.size());
	std::vector<double> z1, w1;
	outside_nodes(X[0], z1, w1);
	Eigen::MatrixXd P1(n, z1.size());
	for (size_t a = 0; a < z1.size(); ++a) {
		double p[2];
		hermite_poly(n, z1[a], p);
		for (int i = 0; i < n; ++i) P1(i, a) = p[i] * std::exp(-z1[a] * z1[a]) * w1[a];
	}
	if (m == 1) {
		Eigen::MatrixXd Q(z1.size(), n);
		for (size_t a = 0; a < z1.size(); ++a) {
			double p[2];
			hermite_poly(n, z1[a], p);
			for (int j = 0; j < n; ++j) Q(a, j) = p[j];
		}
		return P1 * Q;
	}
	// E_12 = e^{-l^2} K(q; l, mu); the q^{-j} normalisation of the last factor cancels in the ratio
	std::vector<double> z2, w2;
	outside_nodes(X[1], z2, w2);
	double q = std::exp(tau[0] - tau[1]);
	Eigen::MatrixXd E(z1.size(), z2.size());
	for (size_t a = 0; a < z1.size(); ++a)
		for (size_t b = 0; b < z2.size(); ++b) E(a, b) = specfun::mehler(q, z1[a], z2[b]) * w2[b];
	Eigen::MatrixXd Q(z2.size(), n);
	for (size_t b = 0; b < z2.size(); ++b) {
		double p[2];
		hermite_poly(n, z2[b], p);
		for (int j = 0; j < n; ++j) Q(b, j) = p[j];
	}
	return P1 * E * Q;
}

}  // namespace

double eynard_mehta_direct(int n, const std::vector<double>& tau, const Region& region) {
	if (n < 1 || n > 2) throw std::invalid_argument("eynard_mehta_direct: n must be 1 or 2");
	if (tau.empty() || tau.size() > 2) throw std::invalid_argument("eynard_mehta_direct: m must be 1 or 2");
	KernelSpec spec;
	spec.kind = ProcessKind::Hermite;
	spec.times = tau;
	spec.n = n;
	spec.validate();
	if (region.m() != spec.m()) throw std::invalid_argument("eynard_mehta_direct: region must list one set per time");
	region.validate(spec);
	if (region.empty()) return 1.0;
	std::vector<std::vector<Interval>> none(tau.size());
	return moment_matrix(n, tau, region.sets).determinant() / moment_matrix(n, tau, none).determinant();
}

}  // namespace dyson
