#pragma once

#include "dyson/kernels.hpp"

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyson {

struct Interval {
	double a, b;
};

// An endpoint xi_{kw}: k is the 0-based time index, w the 1-based position among all
// endpoints of X_k (infinite ones included), sign = (-1)^{w+1}.
struct Endpoint {
	int k;
	int w;
	double xi;
	int sign;
};

struct Region {
	std::vector<std::vector<Interval>> sets;  // sets[k] = X_k

	static Region empty_for(int m) { return Region{std::vector<std::vector<Interval>>(m)}; }
	// X_k = (xi_k, inf) for every k.
	static Region right_tails(const std::vector<double>& xi);

	int m() const { return int(sets.size()); }
	bool empty() const;
	// Finite endpoints in (k, w) order.
	std::vector<Endpoint> endpoints() const;
	void validate(const KernelSpec& spec) const;
	Region shifted(double h) const;
	// Moves one finite endpoint (index into endpoints()) by h.
	Region moved(int e, double h) const;
	std::string to_string() const;
};

// Grammar: "k:(a,b)+(c,d);k2:(e,inf)" with 1-based k; times not listed are empty.
Region parse_region(const std::string& text, int m);

class NearSingularError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct DiscretizedOperator {
	KernelSpec spec;
	Region region;
	int order = 40;
	std::vector<double> z, w;     // all nodes, block k occupies [offset[k], offset[k+1])
	std::vector<int> offset;
	std::vector<double> tails;    // truncation point used for each infinite end, in region order
	Eigen::MatrixXd matrix;       // sqrt(w_a) L(z_a, z_b) sqrt(w_b)

	int size() const { return int(z.size()); }
	int block_of(int a) const;

	// Factorization of I - matrix, computed once on first use.
	const Eigen::PartialPivLU<Eigen::MatrixXd>& lu() const;

	struct Cache;
	std::shared_ptr<Cache> cache;
};

inline constexpr int kDefaultOrder = 40;
inline constexpr double kNearSingular = 1e-12;
inline constexpr double kDiagonalCut = 1e-14;

DiscretizedOperator discretize(const KernelSpec& spec, const Region& region, int order = kDefaultOrder);

struct DetResult {
	double logdet = 0;
	double prob = 1;
	int order_used = 0;
	double refinement_error_estimate = 0;
	std::vector<double> tails;
};

// With estimate = false the order/2 rebuild is skipped and the estimate is left at 0.
DetResult logdet(const DiscretizedOperator& op, bool estimate = true);

double resolvent_at(const DiscretizedOperator& op, int i, int j, double x, double y, Deriv d = Deriv::None);
inline double resolvent_dx_at(const DiscretizedOperator& op, int i, int j, double x, double y) { return resolvent_at(op, i, j, x, y, Deriv::X); }
inline double resolvent_dy_at(const DiscretizedOperator& op, int i, int j, double x, double y) { return resolvent_at(op, i, j, x, y, Deriv::Y); }
inline double resolvent_dxx_at(const DiscretizedOperator& op, int i, int j, double x, double y) { return resolvent_at(op, i, j, x, y, Deriv::XX); }
inline double resolvent_dxy_at(const DiscretizedOperator& op, int i, int j, double x, double y) { return resolvent_at(op, i, j, x, y, Deriv::XY); }
inline double resolvent_dyy_at(const DiscretizedOperator& op, int i, int j, double x, double y) { return resolvent_at(op, i, j, x, y, Deriv::YY); }

// Endpoint-indexed boundary data. Rows/columns follow region.endpoints().
struct BoundaryData {
	std::vector<Endpoint> ends;
	int m = 0;
	std::vector<double> times;
	bool has_p = false;
	Eigen::MatrixXd r, rx, ry, rxx, rxy, ryy;  // E x E
	Eigen::MatrixXd q, qp, p, pp;              // E x m
	Eigen::MatrixXd qt, qtp, pt, ptp;          // m x E

	Eigen::VectorXd xi() const;
	Eigen::VectorXd s() const;
	Eigen::MatrixXd tau() const;   // E x E diag(tau_{k(e)})
	Eigen::MatrixXd tau_m() const; // m x m
};

BoundaryData boundary_data(const DiscretizedOperator& op);

Eigen::VectorXd grad_logdet(const DiscretizedOperator& op);

}  // namespace dyson
