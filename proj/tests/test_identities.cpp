#include "doctest.h"

#include "dyson/identities.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <numbers>

using namespace dyson;

namespace {

KernelSpec make(ProcessKind k, std::vector<double> t) {
	KernelSpec s;
	s.kind = k;
	s.times = std::move(t);
	return s;
}

KernelSpec hermite(int n, std::vector<double> t) {
	KernelSpec s = make(ProcessKind::Hermite, std::move(t));
	s.n = n;
	return s;
}

KernelSpec bessel(double a, std::vector<double> t) {
	KernelSpec s = make(ProcessKind::Bessel, std::move(t));
	s.alpha = a;
	return s;
}

KernelSpec sine(std::vector<double> t, double scale = 1 / std::numbers::pi) {
	KernelSpec s = make(ProcessKind::Sine, std::move(t));
	s.sine_scale = scale;
	return s;
}

double part(const ResidualReport& r, const std::string& name) {
	for (auto& p : r.parts)
		if (p.first == name) return p.second;
	FAIL("missing part " << name);
	return 0;
}

void check_pass(const ResidualReport& r) {
	INFO(r.identity_id << " " << r.config << " residual " << r.max_abs_residual);
	CHECK(r.pass);
	CHECK(r.max_abs_residual < r.tolerance);
}

Eigen::MatrixXd mat(const PartialCheck& p, const std::string& f, bool predicted) {
	return predicted ? p.predicted.at(f) : p.finite_difference.at(f);
}

}  // namespace

TEST_CASE("report json has exactly the five fields") {
	ResidualReport r;
	r.identity_id = "x";
	r.tolerance = 1e-6;
	r.config = "c";
	r.add("a", 2e-7);
	r.add("a", 1e-7);
	r.finish();
	CHECK(r.pass);
	CHECK(r.max_abs_residual == 2e-7);
	auto j = nlohmann::json::parse(r.to_json());
	CHECK(j.size() == 5);
	for (const char* k : {"identity_id", "max_abs_residual", "tolerance", "pass", "config"}) CHECK(j.contains(k));
	r.add("b", NAN);
	r.finish();
	CHECK_FALSE(r.pass);
}

TEST_CASE("airy endpoint sum") {
	KernelSpec a1 = make(ProcessKind::Airy, {0.0}), a2 = make(ProcessKind::Airy, {0.0, 1.0});
	check_pass(airy_endpoint_sum_residual(a1, parse_region("1:(0,inf)", 1)));
	check_pass(airy_endpoint_sum_residual(a2, parse_region("1:(-0.5,inf);2:(0.3,inf)", 2)));
	check_pass(airy_endpoint_sum_residual(a2, parse_region("1:(-1.5,-0.5)+(0.5,inf);2:(-0.3,inf)", 2)));

	// far tail: the resolvent is the kernel to first order
	Region tiny = parse_region("1:(6,inf)", 1);
	check_pass(airy_endpoint_sum_residual(a1, tiny));
	BoundaryData b = boundary_data(discretize(a1, tiny));
	double L = eval_entry(a1, 0, 0, 6.0, 6.0);
	CHECK(std::fabs(b.r(0, 0) / L - 1) < 1e-6);

	CHECK_THROWS_AS(airy_endpoint_sum_residual(hermite(2, {0.0}), tiny), std::invalid_argument);
	CHECK_THROWS_AS(airy_endpoint_sum_residual(a1, Region::empty_for(1)), std::invalid_argument);
}

TEST_CASE("airy closure for r_x - r_y") {
	KernelSpec a2 = make(ProcessKind::Airy, {0.0, 1.0}), a3 = make(ProcessKind::Airy, {0.0, 0.4, 0.9});
	Region r2 = parse_region("1:(-1,inf);2:(-0.5,inf)", 2);
	ResidualReport rep = airy_closure_residual(a2, r2);
	check_pass(rep);
	CHECK(part(rep, "rx_cross_time") < 1e-6);
	check_pass(airy_closure_residual(a3, parse_region("1:(-0.5,inf);2:(0,inf);3:(0.3,inf)", 3)));

	// on the diagonal only the sum is determined
	BoundaryData b = boundary_data(discretize(a2, r2));
	KnownDerivs k = airy_known_rxry(b);
	for (int e = 0; e < 2; ++e) {
		CHECK(k.ry(e, e) == 0.0);
		CHECK(std::fabs(k.rx(e, e) - b.rx(e, e) - b.ry(e, e)) < 1e-10);
	}
}

TEST_CASE("airy multi-interval closure") {
	KernelSpec a1 = make(ProcessKind::Airy, {0.0}), a2 = make(ProcessKind::Airy, {0.0, 1.0});
	ResidualReport m2 = airy_multiinterval_closure_residual(a2, parse_region("1:(-1.5,-0.5)+(0.5,inf);2:(-0.3,inf)", 2));
	check_pass(m2);
	CHECK(part(m2, "rx_same_time") < 1e-5);
	check_pass(airy_multiinterval_closure_residual(a1, parse_region("1:(-2,-1)+(0,inf)", 1)));

	// with one interval per time the two closures see the same cross-time entries
	Region single = parse_region("1:(-1,inf);2:(-0.5,inf)", 2);
	ResidualReport c = airy_closure_residual(a2, single), m = airy_multiinterval_closure_residual(a2, single);
	CHECK(part(c, "rx_cross_time") == part(m, "rx_cross_time"));
	CHECK(part(c, "ry_cross_time") == part(m, "ry_cross_time"));
}

TEST_CASE("airy system against finite differences") {
	KernelSpec a2 = make(ProcessKind::Airy, {0.0, 1.0});
	Region r2 = parse_region("1:(-1,inf);2:(-0.5,inf)", 2);
	int partials = 0;
	for (int e = 0; e < 2; ++e) partials += int(system_partials(a2, r2, e).predicted.size());
	CHECK(partials == 10);
	check_pass(airy_system_residual(a2, r2));
	check_pass(airy_system_residual(a2, parse_region("1:(-1.5,-0.5)+(0.5,inf);2:(-0.3,inf)", 2)));

	// m = 1: dr = -r^2 + r_x + r_y collapses to -q^2
	KernelSpec a1 = make(ProcessKind::Airy, {0.0});
	PartialCheck p = system_partials(a1, parse_region("1:(-1,inf)", 1), 0);
	BoundaryData b = boundary_data(discretize(a1, parse_region("1:(-1,inf)", 1)));
	CHECK(std::fabs(p.predicted.at("r")(0, 0) + b.q(0, 0) * b.q(0, 0)) < 1e-10);
	CHECK(std::fabs(p.finite_difference.at("r")(0, 0) + b.q(0, 0) * b.q(0, 0)) < 1e-6);
	CHECK_THROWS_AS(system_partials(a1, parse_region("1:(-1,inf)", 1), 1), std::out_of_range);
}

TEST_CASE("airy shift-direction equations and Painleve II") {
	KernelSpec a1 = make(ProcessKind::Airy, {0.0}), a2 = make(ProcessKind::Airy, {0.0, 1.0});
	ResidualReport p = airy_ode_residual(a1, parse_region("1:(-1,inf)", 1));
	check_pass(p);
	CHECK(part(p, "painleve2") < 1e-4);

	Region r2 = parse_region("1:(-1,inf);2:(-0.5,inf)", 2);
	ResidualReport m = airy_ode_residual(a2, r2);
	check_pass(m);
	CHECK(part(m, "Dr") < 1e-5);
	CHECK(part(m, "Dlogdet") < 1e-5);

	// second-order stencil: halving eps quarters every part
	ResidualReport big = airy_ode_residual(a2, r2, 0.04), half = airy_ode_residual(a2, r2, 0.02);
	for (auto& [name, v] : big.parts) {
		double ratio = v / part(half, name);
		INFO(name << " ratio " << ratio);
		CHECK(ratio > 3.5);
		CHECK(ratio < 4.5);
	}
}

TEST_CASE("hermite endpoint relations and the 2x2 solve") {
	check_pass(hermite_endpoint_relations_residual(hermite(4, {0.0, 0.6}), parse_region("1:(1,inf);2:(0.5,inf)", 2)));

	// m = 1: r_x + r_y = r^2 - p q
	KernelSpec h1 = hermite(4, {0.0});
	Region r1 = parse_region("1:(1.5,inf)", 1);
	check_pass(hermite_endpoint_relations_residual(h1, r1));
	BoundaryData b = boundary_data(discretize(h1, r1));
	CHECK(std::fabs(b.rx(0, 0) + b.ry(0, 0) - (b.r(0, 0) * b.r(0, 0) - b.p(0, 0) * b.qt(0, 0))) < 1e-6);

	KernelSpec unshifted = hermite(4, {0.0, 0.6});
	unshifted.hermite_shift = false;
	CHECK_THROWS_AS(hermite_endpoint_relations_residual(unshifted, parse_region("1:(1,inf);2:(0.5,inf)", 2)), std::invalid_argument);
}

TEST_CASE("hermite systems") {
	KernelSpec h3 = hermite(3, {0.0, 0.5});
	Region semi = parse_region("1:(1,inf);2:(0.5,inf)", 2), multi = parse_region("1:(-1,0)+(1,inf);2:(0.5,2)", 2);
	ResidualReport s = hermite_system_residual(h3, semi);
	check_pass(s);
	CHECK(s.parts.size() == 9);
	check_pass(hermite_system_residual(h3, multi));
	check_pass(hermite_multiinterval_closure_residual(h3, multi));
	check_pass(hermite_third_order_residual(3, 1.0));
	check_pass(hermite_third_order_residual(2, 0.5));
}

TEST_CASE("sine first-order relations") {
	check_pass(sine_relations_residual(sine({0.0, 0.5}), parse_region("1:(-1,0.5)+(1,2);2:(-0.5,1)", 2)));
	// the unnormalized kernel, on intervals small enough that I - K stays invertible
	check_pass(sine_relations_residual(sine({0.0, 0.5}, 1.0), parse_region("1:(-0.3,0.2);2:(0,0.4)", 2)));
	check_pass(sine_system_residual(sine({0.0, 0.5}), parse_region("1:(-1,0.5)+(1,2);2:(-0.5,1)", 2)));
}

TEST_CASE("sine symmetric interval") {
	KernelSpec s1 = sine({0.0});
	ResidualReport one = sine_interval_residual(s1, {1.2});
	CHECK(part(one, "q_odd") < 1e-8);
	CHECK(part(one, "p_even") < 1e-8);
	CHECK(part(one, "r_symmetric") < 1e-8);

	std::vector<double> grid;
	for (double t = 0.5; t <= 3.0 + 1e-12; t += 0.25) grid.push_back(t);
	check_pass(sine_interval_residual(s1, grid));
	CHECK_THROWS_AS(sine_interval_residual(sine({0.0, 1.0}), grid), std::invalid_argument);
}

TEST_CASE("bessel commutators and resolvent relations") {
	Region two = parse_region("1:(0.5,1.5)+(2,3);2:(1,2.5)", 2);
	ResidualReport half = bessel_commutators_residual(bessel(0.5, {0.0, 0.5}), two);
	CHECK(half.max_abs_residual < 1e-6);
	CHECK_FALSE(half.inconclusive);
	for (double a : {0.0, 2.0}) check_pass(bessel_commutators_residual(bessel(a, {0.0, 0.5}), two));
	check_pass(bessel_mpsi_residual(0.0, {0.3, 1.0, 2.5, 7.0}));
	check_pass(bessel_mpsi_residual(2.5, {0.1, 4.0}));
	CHECK_THROWS_AS(bessel_mpsi_residual(0.0, {-1.0}), std::invalid_argument);
}

TEST_CASE("bessel system") {
	check_pass(bessel_system_residual(bessel(0.5, {0.0, 0.5}), parse_region("1:(0.5,1.5)+(2,3);2:(1,2.5)", 2)));
	ResidualReport single = bessel_system_residual(bessel(0.0, {0.0}), parse_region("1:(0.5,2)", 1));
	check_pass(single);
	CHECK(single.parts.size() == 11);
	ResidualReport near_zero = bessel_system_residual(bessel(0.0, {0.0}), parse_region("1:(0.05,2)", 1));
	CHECK(near_zero.max_abs_residual < 1e-3);
}

TEST_CASE("q~ equations are the q equations of the transposed kernel") {
	Region r = parse_region("1:(-1,inf);2:(-0.5,inf)", 2);
	for (KernelSpec s : {make(ProcessKind::Airy, {0.0, 1.0}), hermite(3, {0.0, 0.5})}) {
		KernelSpec t = s;
		t.transposed = true;
		if (s.kind == ProcessKind::Hermite) r = parse_region("1:(1,inf);2:(0.5,inf)", 2);
		for (int e = 0; e < 2; ++e) {
			PartialCheck p = system_partials(s, r, e), d = system_partials(t, r, e);
			for (auto [tilde, plain] : {std::pair{"qt", "q"}, std::pair{"qtp", "qp"}}) {
				double res = (mat(p, tilde, true) - mat(p, tilde, false)).cwiseAbs().maxCoeff();
				double dual = (mat(d, plain, true) - mat(d, plain, false)).cwiseAbs().maxCoeff();
				CHECK(std::fabs(res - dual) < 1e-8);
				CHECK((mat(d, plain, true) - mat(p, tilde, true).transpose()).cwiseAbs().maxCoeff() < 1e-8);
			}
		}
	}
}

TEST_CASE("residuals shrink under quadrature refinement") {
	auto at = [](int order) {
		IdentityOptions o;
		o.order = order;
		return o;
	};
	struct Case {
		std::function<ResidualReport(const IdentityOptions&)> run;
		int order;
	};
	std::vector<Case> cases{
	    {[](const IdentityOptions& o) { return airy_closure_residual(make(ProcessKind::Airy, {0.0, 1.0}), parse_region("1:(-1,inf);2:(-0.5,inf)", 2), o); }, 4},
	    {[](const IdentityOptions& o) {
		     return airy_multiinterval_closure_residual(make(ProcessKind::Airy, {0.0, 1.0}),
		                                                parse_region("1:(-1.5,-0.5)+(0.5,inf);2:(-0.3,inf)", 2), o);
	     },
	     4},
	    {[](const IdentityOptions& o) { return hermite_endpoint_relations_residual(hermite(4, {0.0, 0.6}), parse_region("1:(1,inf);2:(0.5,inf)", 2), o); }, 8},
	    {[](const IdentityOptions& o) { return sine_relations_residual(sine({0.0, 0.5}), parse_region("1:(-1,0.5)+(1,2);2:(-0.5,1)", 2), o); }, 4},
	    {[](const IdentityOptions& o) {
		     return bessel_commutators_residual(bessel(0.0, {0.0, 0.5}), parse_region("1:(0.5,1.5)+(2,3);2:(1,2.5)", 2), o);
	     },
	     4},
	};
	for (auto& c : cases) {
		double coarse = c.run(at(c.order)).max_abs_residual, fine = c.run(at(2 * c.order)).max_abs_residual;
		INFO(coarse << " -> " << fine);
		CHECK(fine <= coarse / 2);
	}
}

TEST_CASE("closely spaced times at relaxed tolerance") {
	IdentityOptions loose;
	loose.tolerance = 1e-3;
	check_pass(airy_closure_residual(make(ProcessKind::Airy, {0.0, 0.05}), parse_region("1:(-1,inf);2:(-0.5,inf)", 2), loose));
	check_pass(hermite_endpoint_relations_residual(hermite(3, {0.0, 0.05}), parse_region("1:(1,inf);2:(0.5,inf)", 2), loose));
	check_pass(sine_relations_residual(sine({0.0, 0.05}), parse_region("1:(-1,0.5);2:(-0.5,1)", 2), loose));
	check_pass(airy_system_residual(make(ProcessKind::Airy, {0.0, 0.05}), parse_region("1:(-1,inf);2:(-0.5,inf)", 2), loose));
}

TEST_CASE("default matrix passes for every suite") {
	for (const char* suite : {"airy", "hermite", "sine", "bessel"}) {
		auto reps = run_suite(suite);
		CHECK_FALSE(reps.empty());
		for (auto& r : reps) check_pass(r);
	}
	CHECK_THROWS_AS(run_suite("laguerre"), std::invalid_argument);
}
