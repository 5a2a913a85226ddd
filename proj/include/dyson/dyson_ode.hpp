#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace dyson {

class WrongBranchError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct PIIState {
	double s, q, q_prime;
};

struct PIITable {
	std::vector<PIIState> rows;  // ordered from s_start down to s_end
	double error_estimate = 0;   // |q(s_end)| difference against a run at tol/100
};

// q'' = s q + 2 q^3 from q = Ai, q' = Ai' at s_start, integrated down to s_end.
// Rows every out_step, plus s_end itself.
PIITable integrate_pii(double s_start, double s_end, double tol = 1e-12, double out_step = 0.05, bool estimate = true);
// Same integration from arbitrary data; throws WrongBranchError once |q| > 1e6.
PIITable integrate_pii_from(const PIIState& init, double s_end, double tol = 1e-12, double out_step = 0.05, bool estimate = true);

// Airy flow with X_k = (offset_k + xi, inf). q, qt are m x m; dq = Dq, dqt = Dqt.
struct FlowState {
	double xi = 0;
	Eigen::MatrixXd q, dq, qt, dqt, r;
	double logdet = 0;
};

struct FlowTable {
	std::vector<FlowState> rows;
	double error_estimate = 0;  // max endpoint state difference against a run at tol/100
};

// Boundary data of the fredholm operator at common shift xi, packaged as a flow state.
FlowState airy_flow_init(const std::vector<double>& tau, const std::vector<double>& offsets, double xi, int order = 40);

// The right-hand side used by the integrator (d/dxi of every field).
FlowState airy_flow_rhs(const std::vector<double>& tau, const std::vector<double>& offsets, const FlowState& s);

FlowTable integrate_airy_system(const std::vector<double>& tau, const std::vector<double>& offsets, double xi0, double xi1,
                                const FlowState& init, double tol = 1e-12, double out_step = 0.05, bool estimate = true);

struct TwRow {
	double s, f_fredholm, f_ode;
};

// F2 on the grid two ways: the fredholm determinant, and exp of log F2 carried along
// (log F)' = r, r' = -q^2 with q from Painleve II, anchored at s_start by fredholm.
// Grid points must lie in [-8, s_start].
std::vector<TwRow> tw_table(const std::vector<double>& s_grid, double s_start = 8.0, double tol = 1e-12);

}  // namespace dyson
