#pragma once

#include "dyson/fredholm.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dyson {

struct ResidualReport {
	std::string identity_id;
	double max_abs_residual = 0;
	double tolerance = 0;
	bool pass = false;
	std::string config;
	// Per-part maxima (not serialized).
	std::vector<std::pair<std::string, double>> parts;
	// Set when a linear solve was too ill-conditioned to decide.
	bool inconclusive = false;
	double condition = 0;

	void add(const std::string& name, double v);
	void finish();
	// One JSON object: identity_id, max_abs_residual, tolerance, pass, config.
	std::string to_json() const;
};

struct IdentityOptions {
	int order = kDefaultOrder;
	double fd_step = 1e-4;
	// Replaces the identity's default tolerance when positive.
	double tolerance = 0;
};

// r_x and r_y rebuilt from the undifferentiated unknowns. Off-diagonal entries are
// individually determined; on the diagonal only the sum is, and it is stored in rx.
struct KnownDerivs {
	Eigen::MatrixXd rx, ry;
};
KnownDerivs airy_known_rxry(const BoundaryData& bd);
KnownDerivs hermite_known_rxry(const BoundaryData& bd);
KnownDerivs sine_known_rxry(const BoundaryData& bd);

// Airy
ResidualReport airy_endpoint_sum_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport airy_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport airy_multiinterval_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport airy_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
// Shifts every endpoint together by +-eps. parts: "Dr", "D2q", "D2qt", "Dlogdet", and at m = 1 "painleve2".
ResidualReport airy_ode_residual(const KernelSpec& spec, const Region& region, double eps = 1e-3, const IdentityOptions& o = {});

// Hermite (spec.hermite_shift must be on)
ResidualReport hermite_endpoint_relations_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport hermite_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport hermite_multiinterval_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
// m = 1, X = (xi, inf): r''' = 4(xi^2 - 2n) r' - 4 xi r - 6 r'^2 by Richardson-extrapolated differences.
ResidualReport hermite_third_order_residual(int n, double xi, double h = 1e-2, const IdentityOptions& o = {});

// Sine
ResidualReport sine_relations_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport sine_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
// m = 1, X = (-t, t) over the grid: symmetry, dr/dt = 2 rbar^2 and rbar = -q1 p1 / t.
ResidualReport sine_interval_residual(const KernelSpec& spec, const std::vector<double>& t_grid, const IdentityOptions& o = {});

// Bessel
ResidualReport bessel_commutators_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
ResidualReport bessel_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o = {});
// (D^2 + beta(1 - beta) x^-2)(x psi) = 2 phi - x psi at the given points.
ResidualReport bessel_mpsi_residual(double alpha, const std::vector<double>& xs);

// Predicted partial derivatives of every boundary field with respect to endpoint e,
// next to centered differences. Field names: r, rx, ry, q, qt, qp, qtp, p, pt, pp, ptp.
struct PartialCheck {
	std::map<std::string, Eigen::MatrixXd> predicted, finite_difference;
};
PartialCheck system_partials(const KernelSpec& spec, const Region& region, int e, const IdentityOptions& o = {});

// The default verification matrix for one suite: "airy", "hermite", "sine", "bessel" or "all".
std::vector<ResidualReport> run_suite(const std::string& suite);

}  // namespace dyson
