#pragma once

#include <vector>

namespace dyson::specfun {

struct FunctionAccuracy {
	double abs_tol;
	double lo, hi;
};

inline constexpr FunctionAccuracy kAiryAccuracy{1e-12, -20.0, 20.0};
inline constexpr FunctionAccuracy kBesselAccuracy{1e-12, 0.0, 200.0};
inline constexpr FunctionAccuracy kHermiteAccuracy{1e-12, -40.0, 40.0};

inline constexpr int kDefaultKMax = 500;

// Ai and Ai' together: Taylor steps from tabulated anchors on [-10, 12], asymptotic outside.
void airy(double x, double& ai, double& aip);
double airy_ai(double x);
double airy_ai_prime(double x);

double bessel_j(double alpha, double x);
// e^{-x} I_alpha(x), alpha > -1.
double bessel_i_scaled(double alpha, double x);

// sqrt(z) J_alpha(z)
double phi_bessel(double alpha, double z);
double phi_bessel_prime(double alpha, double z);

// e^{-x^2/2} times the orthonormal Hermite polynomial.
double hermite_phi(int k, double x, int kmax = kDefaultKMax);
// out[0..kmax_needed] filled with phi_0..phi_kmax_needed
void hermite_phi_table(int kmax_needed, double x, double* out, int kmax = kDefaultKMax);
double hermite_phi_prime(int k, double x, int kmax = kDefaultKMax);

// x^{alpha/2} e^{-x/2} times the orthonormal Laguerre polynomial L_k^alpha.
double laguerre_phi(double alpha, int k, double x, int kmax = kDefaultKMax);
void laguerre_phi_table(double alpha, int kmax_needed, double x, double* out, int kmax = kDefaultKMax);
double laguerre_phi_prime(double alpha, int k, double x, int kmax = kDefaultKMax);

// K(q; lambda, mu) of the Gaussian chain.
double mehler(double q, double lambda, double mu);
// sum_k q^k phi_k(x) phi_k(y) = e^{(y^2-x^2)/2} K(q; x, y), with x/y partials.
struct Bilinear {
	double v, dx, dy, dxx, dxy, dyy;
};
Bilinear mehler_phi_sum(double q, double x, double y);

// Hille-Hardy kernel K(q; lambda, mu) for weight lambda^alpha e^{-lambda}.
double hille_hardy(double q, double alpha, double lambda, double mu);
// sum_k q^{2k} phi_k(x) phi_k(y) in the Laguerre functions above.
double hille_hardy_phi_sum(double q, double alpha, double x, double y);

}  // namespace dyson::specfun
