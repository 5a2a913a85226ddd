#include "doctest.h"

#include "dyson/quadrature.hpp"
#include "dyson/specfun.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace dyson;
using namespace dyson::specfun;

namespace {

constexpr double pi = std::numbers::pi;

struct Quad {
	std::vector<double> z, w;
};

Quad line_rule(double a, double b, int panels, int n = 40) {
	Quad q;
	append_panels(a, b, panels, n, q.z, q.w);
	return q;
}

double lag_oracle_1_3(double x) {
	// L_3^1(x) = (24 - 36x + 12x^2 - x^3)/6 with norm^2 = Gamma(5)/3! = 4
	double L = (24 - 36 * x + 12 * x * x - x * x * x) / 6;
	return std::sqrt(x) * std::exp(-x / 2) * L / 2;
}

}  // namespace

TEST_CASE("airy closed forms at zero") {
	CHECK(airy_ai(0) == doctest::Approx(std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3)).epsilon(1e-15));
	CHECK(airy_ai_prime(0) == doctest::Approx(-std::pow(3.0, -1.0 / 3) / std::tgamma(1.0 / 3)).epsilon(1e-15));
	double a10 = airy_ai(10);
	CHECK(a10 > 0);
	CHECK(a10 < 1e-9);
}

TEST_CASE("airy matches boost on [-30, 30]") {
	double worst = 0, worst_rel = 0;
	for (double x = -30; x <= 30; x += 0.0371) {
		double a, ap;
		airy(x, a, ap);
		double ea = boost::math::airy_ai(x), eap = boost::math::airy_ai_prime(x);
		worst = std::max({worst, std::fabs(a - ea), std::fabs(ap - eap) / std::max(1.0, std::sqrt(std::fabs(x)))});
		if (x > 0) worst_rel = std::max(worst_rel, std::fabs(a / ea - 1));
	}
	CHECK(worst < kAiryAccuracy.abs_tol);
	CHECK(worst_rel < 1e-12);
}

TEST_CASE("airy ode by finite differences") {
	// fourth-order stencil: the three-point one has ~1e-6 truncation error at |x| = 5
	double h = 1e-3, worst = 0;
	for (double x = -5; x <= 5; x += 0.25) {
		double d2 = (-airy_ai(x + 2 * h) + 16 * airy_ai(x + h) - 30 * airy_ai(x) + 16 * airy_ai(x - h) - airy_ai(x - 2 * h)) /
		            (12 * h * h);
		worst = std::max(worst, std::fabs(d2 - x * airy_ai(x)));
	}
	CHECK(worst < 1e-8);
	CHECK_THROWS_AS(airy_ai(NAN), std::domain_error);
}

TEST_CASE("bessel_j values") {
	CHECK(bessel_j(0, 0) == 1.0);
	for (double x : {1.0, 2.0, 5.0})
		CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2 / (pi * x)) * std::sin(x)).epsilon(1e-14));
	CHECK(std::fabs(bessel_j(1, 3.8317)) < 1e-4);
	CHECK_THROWS_AS(bessel_j(-0.7, 1.0), std::invalid_argument);
	double worst = 0;
	for (double alpha : {-0.5, -0.25, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5})
		for (double x = 0.01; x <= 200; x += 0.173)
			worst = std::max(worst, std::fabs(bessel_j(alpha, x) - boost::math::cyl_bessel_j(alpha, x)));
	CHECK(worst < kBesselAccuracy.abs_tol);
}

TEST_CASE("first zero of J1 by bisection on the series") {
	double lo = 3.5, hi = 4.0;
	for (int it = 0; it < 60; ++it) {
		double mid = (lo + hi) / 2;
		(bessel_j(1, lo) * bessel_j(1, mid) <= 0 ? hi : lo) = mid;
	}
	CHECK(lo == doctest::Approx(3.8317059702075123).epsilon(1e-12));
}

TEST_CASE("phi_bessel") {
	for (double z : {0.5, 1.0}) CHECK(phi_bessel(0.5, z) == doctest::Approx(std::sqrt(2 / pi) * std::sin(z)).epsilon(1e-14));
	CHECK(phi_bessel(0, 0) == 0.0);
	CHECK(phi_bessel(-0.5, 0) == doctest::Approx(std::sqrt(2 / pi)));
	CHECK(phi_bessel(2, 1) == doctest::Approx(boost::math::cyl_bessel_j(2, 1.0)).epsilon(1e-14));
	for (double z : {0.3, 7.0, 18.0, 40.0})
		CHECK(phi_bessel(1.3, z) == doctest::Approx(std::sqrt(z) * bessel_j(1.3, z)).epsilon(1e-13));
}

TEST_CASE("bessel differentiation formulas") {
	double h = 1e-5, worst = 0;
	for (double alpha : {0.0, 0.5, 2.0}) {
		double beta = alpha + 0.5;
		for (double z = 0.1; z <= 20; z += 0.37) {
			double d0 = (phi_bessel(alpha, z + h) - phi_bessel(alpha, z - h)) / (2 * h);
			double d1 = (phi_bessel(alpha + 1, z + h) - phi_bessel(alpha + 1, z - h)) / (2 * h);
			worst = std::max(worst, std::fabs(d0 + phi_bessel(alpha + 1, z) - beta / z * phi_bessel(alpha, z)));
			worst = std::max(worst, std::fabs(d1 - phi_bessel(alpha, z) + beta / z * phi_bessel(alpha + 1, z)));
			worst = std::max(worst, std::fabs(d0 - phi_bessel_prime(alpha, z)));
		}
	}
	CHECK(worst < 1e-6);
}

TEST_CASE("scaled modified bessel matches boost") {
	double worst = 0;
	for (double alpha : {-0.5, 0.0, 1.0, 2.5})
		for (double x = 0.05; x < 150; x *= 1.3)
			worst = std::max(worst, std::fabs(bessel_i_scaled(alpha, x) / (std::exp(-x) * boost::math::cyl_bessel_i(alpha, x)) - 1));
	CHECK(worst < 1e-12);
}

TEST_CASE("hermite functions") {
	CHECK(hermite_phi(0, 0) == doctest::Approx(std::pow(pi, -0.25)).epsilon(1e-15));
	CHECK(hermite_phi(0, 1) == doctest::Approx(std::pow(pi, -0.25) * std::exp(-0.5)).epsilon(1e-15));
	CHECK_THROWS_AS(hermite_phi(501, 0.0), std::out_of_range);
	CHECK_NOTHROW(hermite_phi(600, 0.0, 600));

	Quad q = line_rule(-12, 12, 12);
	std::vector<std::vector<double>> tab(q.z.size(), std::vector<double>(21));
	for (size_t a = 0; a < q.z.size(); ++a) hermite_phi_table(20, q.z[a], tab[a].data());
	double worst = 0;
	for (int j = 0; j <= 20; ++j)
		for (int k = 0; k <= 20; ++k) {
			double s = 0;
			for (size_t a = 0; a < q.z.size(); ++a) s += q.w[a] * tab[a][j] * tab[a][k];
			worst = std::max(worst, std::fabs(s - (j == k)));
		}
	CHECK(worst < 1e-10);
}

TEST_CASE("hermite_phi(100, x) against 50-digit recurrence") {
	using mp = boost::multiprecision::cpp_bin_float_50;
	for (double x : {0.0, 0.37, 5.5, 13.9}) {
		mp X = x, p0 = exp(-X * X / 2) / sqrt(sqrt(boost::math::constants::pi<mp>())), p1 = sqrt(mp(2)) * X * p0;
		for (int k = 1; k < 100; ++k) {
			mp p2 = (X * p1 - sqrt(mp(k) / 2) * p0) / sqrt(mp(k + 1) / 2);
			p0 = p1;
			p1 = p2;
		}
		CHECK(std::fabs(hermite_phi(100, x) - p1.convert_to<double>()) < 1e-10);
	}
}

TEST_CASE("hermite ladder relations and derivative") {
	double worst = 0, worst_d = 0;
	std::vector<double> t(33);
	for (double x = -6; x <= 6; x += 0.41) {
		hermite_phi_table(32, x, t.data());
		for (int k = 1; k <= 30; ++k)
			worst = std::max(worst, std::fabs(x * t[k] - std::sqrt((k + 1) / 2.0) * t[k + 1] - std::sqrt(k / 2.0) * t[k - 1]));
		double h = 1e-5;
		for (int k : {0, 3, 17})
			worst_d = std::max(worst_d, std::fabs(hermite_phi_prime(k, x) - (hermite_phi(k, x + h) - hermite_phi(k, x - h)) / (2 * h)));
	}
	CHECK(worst < 1e-9);
	CHECK(worst_d < 1e-8);
}

TEST_CASE("laguerre functions") {
	for (double x : {0.5, 2.0}) CHECK(laguerre_phi(0, 0, x) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-15));
	CHECK(laguerre_phi(1, 3, 4) == doctest::Approx(lag_oracle_1_3(4)).epsilon(1e-13));
	CHECK_THROWS_AS(laguerre_phi(-1, 0, 1.0), std::domain_error);

	// x = u^2 removes the x^alpha endpoint singularity
	Quad q = line_rule(0, 11, 11);
	for (size_t a = 0; a < q.z.size(); ++a) {
		q.w[a] *= 2 * q.z[a];
		q.z[a] *= q.z[a];
	}
	for (double alpha : {0.0, 1.0, 2.5}) {
		std::vector<std::vector<double>> tab(q.z.size(), std::vector<double>(16));
		for (size_t a = 0; a < q.z.size(); ++a) laguerre_phi_table(alpha, 15, q.z[a], tab[a].data());
		double worst = 0;
		for (int j = 0; j <= 15; ++j)
			for (int k = 0; k <= 15; ++k) {
				double s = 0;
				for (size_t a = 0; a < q.z.size(); ++a) s += q.w[a] * tab[a][j] * tab[a][k];
				worst = std::max(worst, std::fabs(s - (j == k)));
			}
		CHECK(worst < 1e-10);
	}
	double h = 1e-5;
	for (double x : {0.7, 3.0, 11.0})
		CHECK(laguerre_phi_prime(1.5, 6, x) ==
		      doctest::Approx((laguerre_phi(1.5, 6, x + h) - laguerre_phi(1.5, 6, x - h)) / (2 * h)).epsilon(1e-8));
	// x u'' + u' + (k + (a+1)/2 - x/4 - a^2/(4x)) u = 0
	for (double x : {0.8, 2.5, 9.0}) {
		double a = 2.0, H = 1e-3;
		int k = 5;
		double u = laguerre_phi(a, k, x), up = laguerre_phi_prime(a, k, x);
		auto f = [&](double t) { return laguerre_phi(a, k, t); };
		double upp = (-f(x + 2 * H) + 16 * f(x + H) - 30 * u + 16 * f(x - H) - f(x - 2 * H)) / (12 * H * H);
		CHECK(std::fabs(x * upp + up + (k + (a + 1) / 2 - x / 4 - a * a / (4 * x)) * u) < 1e-6);
	}
}

TEST_CASE("mehler kernel") {
	CHECK_THROWS_AS(mehler(1.0, 0, 0), std::domain_error);
	CHECK_THROWS_AS(mehler(0.0, 0, 0), std::domain_error);
	double lam = 0.4, mu = -0.9;
	CHECK(mehler(1e-9, lam, mu) == doctest::Approx(std::exp(-mu * mu) / std::sqrt(pi)).epsilon(1e-8));

	// p_i are the orthonormal polynomials: phi_i(x) e^{x^2/2}
	Quad q = line_rule(-14, 14, 14);
	double worst = 0;
	std::vector<double> t(11);
	for (int i = 0; i <= 10; ++i) {
		double s = 0;
		for (size_t a = 0; a < q.z.size(); ++a) {
			hermite_phi_table(10, q.z[a], t.data());
			s += q.w[a] * mehler(0.5, 0.3, q.z[a]) * t[i] * std::exp(q.z[a] * q.z[a] / 2);
		}
		hermite_phi_table(10, 0.3, t.data());
		worst = std::max(worst, std::fabs(s - std::pow(0.5, i) * t[i] * std::exp(0.045)));
	}
	CHECK(worst < 1e-8);

	double s = 0;
	for (size_t a = 0; a < q.z.size(); ++a) s += q.w[a] * mehler(0.5, 0.3, q.z[a]) * mehler(0.25, q.z[a], -0.7);
	CHECK(std::fabs(s - mehler(0.125, 0.3, -0.7)) < 1e-8);
}

TEST_CASE("weighted mehler sum and its derivatives") {
	std::vector<double> tx(400), ty(400);
	double q = 0.6, x = 0.7, y = -1.2;
	hermite_phi_table(399, x, tx.data());
	hermite_phi_table(399, y, ty.data());
	double s = 0;
	for (int k = 0; k < 400; ++k) s += std::pow(q, k) * tx[k] * ty[k];
	Bilinear b = mehler_phi_sum(q, x, y);
	CHECK(b.v == doctest::Approx(s).epsilon(1e-13));
	CHECK(b.v == doctest::Approx(std::exp((y * y - x * x) / 2) * mehler(q, x, y)).epsilon(1e-13));
	double h = 1e-4;
	auto f = [&](double a, double c) { return mehler_phi_sum(q, a, c).v; };
	CHECK(b.dx == doctest::Approx((f(x + h, y) - f(x - h, y)) / (2 * h)).epsilon(1e-7));
	CHECK(b.dy == doctest::Approx((f(x, y + h) - f(x, y - h)) / (2 * h)).epsilon(1e-7));
	CHECK(b.dxy == doctest::Approx((f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h)).epsilon(1e-6));
	CHECK(b.dxx == doctest::Approx((f(x + h, y) - 2 * b.v + f(x - h, y)) / (h * h)).epsilon(1e-6));
	CHECK(b.dyy == doctest::Approx((f(x, y + h) - 2 * b.v + f(x, y - h)) / (h * h)).epsilon(1e-6));
}

TEST_CASE("hille-hardy kernel") {
	double q = 0.6, alpha = 1.0, lam = 1.3;
	Quad r = line_rule(0, 80, 20);
	std::vector<double> t(9);
	auto p = [&](int i, double x) {
		laguerre_phi_table(alpha, 8, x, t.data());
		return t[i] * std::exp(x / 2) * std::pow(x, -alpha / 2);
	};
	double worst = 0;
	for (int i = 0; i <= 8; ++i) {
		double s = 0;
		for (size_t a = 0; a < r.z.size(); ++a) s += r.w[a] * hille_hardy(q, alpha, lam, r.z[a]) * p(i, r.z[a]);
		worst = std::max(worst, std::fabs(s - std::pow(q, 2 * i) * p(i, lam)));
	}
	CHECK(worst < 1e-8);

	for (auto [l, m] : {std::pair{0.4, 2.2}, std::pair{3.1, 0.9}}) {
		double s = 0;
		for (size_t a = 0; a < r.z.size(); ++a) s += r.w[a] * hille_hardy(0.7, 2.5, l, r.z[a]) * hille_hardy(0.5, 2.5, r.z[a], m);
		CHECK(std::fabs(s - hille_hardy(0.35, 2.5, l, m)) < 1e-8);
	}

	auto bal = [](double qq, double a, double l, double m) {
		return hille_hardy(qq, a, l, m) * std::pow(l / m, a / 2) * std::exp((m - l) / 2);
	};
	CHECK(std::fabs(bal(0.6, 1.5, 0.8, 2.9) - bal(0.6, 1.5, 2.9, 0.8)) < 1e-10);

	std::vector<double> tx(300), ty(300);
	laguerre_phi_table(1.5, 299, 0.8, tx.data());
	laguerre_phi_table(1.5, 299, 2.9, ty.data());
	double s = 0;
	for (int k = 0; k < 300; ++k) s += std::pow(0.6, 2 * k) * tx[k] * ty[k];
	CHECK(hille_hardy_phi_sum(0.6, 1.5, 0.8, 2.9) == doctest::Approx(s).epsilon(1e-13));
	CHECK(bal(0.6, 1.5, 0.8, 2.9) == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("gauss-legendre rule") {
	const GaussRule& g = gauss_legendre(40);
	double s = 0;
	for (int i = 0; i < 40; ++i) s += g.w[i] * std::pow(g.x[i], 78);
	CHECK(s == doctest::Approx(2.0 / 79).epsilon(1e-13));
	CHECK(std::is_sorted(g.x.begin(), g.x.end()));
}
