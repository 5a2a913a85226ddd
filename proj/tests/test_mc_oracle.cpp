#include "doctest.h"

#include "dyson/fredholm.hpp"
#include "dyson/mc_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace dyson;

namespace {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	size_t i = 0, j = 0;
	double d = 0;
	while (i < a.size() && j < b.size()) {
		double x = std::min(a[i], b[j]);
		while (i < a.size() && a[i] <= x) ++i;
		while (j < b.size() && b[j] <= x) ++j;
		d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
	}
	return d;
}

// two-sample critical value at alpha = 0.0027
double ks_critical(size_t n1, size_t n2) { return 1.82 * std::sqrt(double(n1 + n2) / double(n1 * n2)); }

constexpr int kDraws = 100000;

Eigen::MatrixXcd fixed_hermitian() {
	Eigen::MatrixXcd H(2, 2);
	H << 1.5, std::complex<double>(0.3, -0.2), std::complex<double>(0.3, 0.2), -0.4;
	return H;
}

std::vector<double> largest_after(const Eigen::MatrixXcd& H0, const std::vector<double>& steps, std::uint64_t seed) {
	std::vector<double> out;
	for (int t = 0; t < kDraws; ++t) {
		CounterRng rng(seed, t);
		OUState s{ProcessKind::Hermite, H0};
		for (double d : steps) s = evolve_ou(s, d, rng);
		out.push_back(spectrum(s).back());
	}
	return out;
}

std::vector<double> largest_equilibrium(int n, std::uint64_t seed) {
	std::vector<double> out;
	for (int t = 0; t < kDraws; ++t) {
		CounterRng rng(seed, t);
		out.push_back(sample_equilibrium_gue(n, rng).back());
	}
	return out;
}

double fredholm_prob(const KernelSpec& s, const Region& r) { return std::exp(logdet(discretize(s, r), false).logdet); }

// integral of f(x, y) (x - y)^2 e^{-x^2 - y^2} over x, y < c, by nested adaptive quadrature
template <class F>
double gue2_integral(F f, double c) {
	using boost::math::quadrature::gauss_kronrod;
	double lo = -12, hi = std::min(c, 12.0);
	return gauss_kronrod<double, 61>::integrate(
	    [&](double x) {
		    return gauss_kronrod<double, 61>::integrate(
		        [&](double y) { return f(x, y) * (x - y) * (x - y) * std::exp(-x * x - y * y); }, lo, hi, 10, 1e-14);
	    },
	    lo, hi, 10, 1e-14);
}

}  // namespace

TEST_CASE("counter rng is a pure function of seed, stream and position") {
	CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
	for (int k = 0; k < 10; ++k) {
		auto x = a();
		CHECK(x == b());
		CHECK(x != c());
		CHECK(x != d());
	}
}

TEST_CASE("GUE n = 1 eigenvalue has variance 1/2") {
	double s = 0, s2 = 0;
	for (int t = 0; t < kDraws; ++t) {
		CounterRng rng(11, t);
		double x = sample_equilibrium_gue(1, rng)[0];
		s += x;
		s2 += x * x;
	}
	double mean = s / kDraws, var = s2 / kDraws - mean * mean;
	// sd of the sample variance of N(0, 1/2) is sqrt(2/N)/2
	CHECK(std::fabs(var - 0.5) < 3 * std::sqrt(2.0 / kDraws) * 0.5);
	CHECK(std::fabs(mean) < 3 * std::sqrt(0.5 / kDraws));
}

TEST_CASE("GUE n = 2 largest eigenvalue mean matches the density") {
	double Z = gue2_integral([](double, double) { return 1.0; }, 12);
	double mean = gue2_integral([](double x, double y) { return std::max(x, y); }, 12) / Z;
	double m2 = gue2_integral([](double x, double y) { return std::max(x, y) * std::max(x, y); }, 12) / Z;
	std::vector<double> v = largest_equilibrium(2, 12);
	double s = 0;
	for (double x : v) s += x;
	double se = std::sqrt((m2 - mean * mean) / kDraws);
	CHECK(std::fabs(s / kDraws - mean) < 3 * se);
	CHECK(mean == doctest::Approx(1 / std::sqrt(2 * M_PI) * 2).epsilon(1e-8));  // E max = E|x - y|/2 = 2/sqrt(2 pi)
}

TEST_CASE("Laguerre p = n = 1 is exponential") {
	std::vector<double> v;
	for (int t = 0; t < kDraws; ++t) {
		CounterRng rng(13, t);
		auto ev = sample_equilibrium_laguerre(1, 1, rng);
		REQUIRE(ev.size() == 1);
		v.push_back(ev[0]);
	}
	double d = 0;
	std::sort(v.begin(), v.end());
	for (size_t i = 0; i < v.size(); ++i) {
		double F = 1 - std::exp(-v[i]);
		d = std::max({d, std::fabs(F - double(i) / v.size()), std::fabs(F - double(i + 1) / v.size())});
	}
	CHECK(d < 1.82 / std::sqrt(double(kDraws)));
	CHECK_THROWS_AS(sample_equilibrium_laguerre(1, 2, *std::make_unique<CounterRng>(1, 1)), std::invalid_argument);
}

TEST_CASE("OU step: long time forgets, steps compose, equilibrium is stationary") {
	Eigen::MatrixXcd H0 = fixed_hermitian();
	auto eq = largest_equilibrium(2, 21);
	CHECK(ks_statistic(largest_after(H0, {40.0}, 22), eq) < ks_critical(kDraws, kDraws));

	auto two = largest_after(H0, {0.3, 0.3}, 23);
	auto one = largest_after(H0, {0.6}, 24);
	CHECK(ks_statistic(two, one) < ks_critical(kDraws, kDraws));
	// and the fixed start is still visible at 0.6
	CHECK(ks_statistic(one, eq) > 5 * ks_critical(kDraws, kDraws));

	std::vector<double> stepped;
	for (int t = 0; t < kDraws; ++t) {
		CounterRng rng(25, t);
		OUState s = equilibrium_state(ProcessKind::Hermite, 2, 2, rng);
		stepped.push_back(spectrum(evolve_ou(s, 0.5, rng)).back());
	}
	CHECK(ks_statistic(stepped, eq) < ks_critical(kDraws, kDraws));

	CounterRng rng(1, 1);
	CHECK_THROWS_AS(evolve_ou(OUState{ProcessKind::Hermite, H0}, 0.0, rng), std::invalid_argument);
}

TEST_CASE("joint probability: empty region, validation, determinism") {
	MCConfig c;
	c.n = 3;
	c.tau = {0.0, 0.7};
	c.region = Region::empty_for(2);
	c.trials = 10000;
	MCEstimate e = estimate_joint_prob(c);
	CHECK(e.p_hat == 1.0);
	CHECK(e.std_err == 0.0);

	c.region = parse_region("1:(1.5,inf);2:(1.5,inf)", 2);
	c.seed = 99;
	MCEstimate a = estimate_joint_prob(c), b = estimate_joint_prob(c);
	CHECK(a.p_hat == b.p_hat);
	CHECK(a.std_err == std::sqrt(a.p_hat * (1 - a.p_hat) / a.trials));
	c.seed = 100;
	CHECK(estimate_joint_prob(c).p_hat != a.p_hat);

	MCConfig bad = c;
	bad.trials = 9999;
	CHECK_THROWS_AS(estimate_joint_prob(bad), std::invalid_argument);
	bad = c;
	bad.kind = ProcessKind::Airy;
	CHECK_THROWS_AS(estimate_joint_prob(bad), std::invalid_argument);
	bad = c;
	bad.region = Region::empty_for(1);
	CHECK_THROWS_AS(estimate_joint_prob(bad), std::invalid_argument);
	bad = c;
	bad.kind = ProcessKind::Laguerre;
	bad.p = 2;
	CHECK_THROWS_AS(estimate_joint_prob(bad), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the Hermite determinant") {
	MCConfig c;
	c.n = 3;
	c.tau = {0.0, 0.7};
	c.region = parse_region("1:(1.5,inf);2:(1.5,inf)", 2);
	c.trials = 200000;
	c.seed = 2024;
	MCEstimate e = estimate_joint_prob(c);
	double det = fredholm_prob(mc_kernel(c), c.region);
	CHECK(std::fabs(e.p_hat - det) < 3 * e.std_err);
}

TEST_CASE("Monte Carlo agrees with the Laguerre determinant") {
	MCConfig c;
	c.kind = ProcessKind::Laguerre;
	c.n = 2;
	c.p = 2;
	c.tau = {0.0, 0.5};
	c.region = parse_region("1:(4,inf);2:(4,inf)", 2);
	c.trials = 200000;
	c.seed = 2025;
	MCEstimate e = estimate_joint_prob(c);
	double det = fredholm_prob(mc_kernel(c), c.region);
	CHECK(std::fabs(e.p_hat - det) < 3 * e.std_err);
}

TEST_CASE("Eynard-Mehta: empty region and size limits") {
	CHECK(eynard_mehta_direct(2, {0.0, 1.0}, Region::empty_for(2)) == 1.0);
	CHECK_THROWS_AS(eynard_mehta_direct(3, {0.0}, Region::empty_for(1)), std::invalid_argument);
	CHECK_THROWS_AS(eynard_mehta_direct(2, {0.0, 1.0, 2.0}, Region::empty_for(3)), std::invalid_argument);
	CHECK_THROWS_AS(eynard_mehta_direct(2, {0.0, 1.0}, Region::empty_for(1)), std::invalid_argument);
}

TEST_CASE("Eynard-Mehta n = 2, m = 1 equals the two-point gap probability") {
	double Z = gue2_integral([](double, double) { return 1.0; }, 12);
	double gap = gue2_integral([](double, double) { return 1.0; }, 1.0) / Z;
	double em = eynard_mehta_direct(2, {0.0}, parse_region("1:(1,inf)", 1));
	CHECK(std::fabs(em - gap) < 1e-10);
}

TEST_CASE("Eynard-Mehta agrees with the extended Hermite determinant") {
	struct Case {
		int n;
		std::vector<double> tau;
		const char* region;
	};
	std::vector<Case> cases{
	    {2, {0.0, 1.0}, "1:(1,inf);2:(1,inf)"},
	    {1, {0.0, 0.4}, "1:(0.5,inf);2:(-inf,-0.2)"},
	    {2, {0.0, 0.3}, "1:(-0.5,0.5);2:(-inf,-1)+(1,2)"},
	    {2, {0.0}, "1:(-inf,-0.3)+(0.2,1.1)"},
	    {2, {-1.0, 0.5}, "2:(0,inf)"},
	};
	for (const auto& c : cases) {
		KernelSpec s;
		s.kind = ProcessKind::Hermite;
		s.times = c.tau;
		s.n = c.n;
		Region r = parse_region(c.region, int(c.tau.size()));
		double em = eynard_mehta_direct(c.n, c.tau, r);
		double det = fredholm_prob(s, r);
		INFO(c.region);
		CHECK(std::fabs(em - det) < 1e-6);
	}
}
