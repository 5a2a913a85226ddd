#include "dyson/dyson_ode.hpp"

#include "dyson/fredholm.hpp"
#include "dyson/specfun.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace dyson {

namespace ode = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

constexpr double kBlowUp = 1e6;
constexpr double kLowest = -8.0;

std::vector<double> descending_grid(double a, double b, double step) {
	std::vector<double> g;
	for (int k = 0;; ++k) {
		double s = a - k * step;
		if (s <= b + 1e-12 * step) break;
		g.push_back(s);
	}
	g.push_back(b);
	return g;
}

// Integrates y along the (monotone) time list, calling obs(y, t) at each entry.
// The solutions start exponentially small, so error control is relative: an absolute
// floor of tol would let q ~ 1e-8 at the anchor drift off the separatrix.
template <class Sys, class Obs>
void run(Sys sys, State y, const std::vector<double>& times, double tol, Obs obs) {
	if (times.size() == 1) {
		obs(y, times[0]);
		return;
	}
	double dt = (times[1] - times[0]) / 8;
	auto stepper = ode::make_dense_output(tol * 1e-12, tol, ode::runge_kutta_dopri5<State>());
	ode::integrate_times(stepper, sys, y, times.begin(), times.end(), dt, obs);
}

void pii_rhs(const State& y, State& dy, double s) {
	if (!(std::fabs(y[0]) < kBlowUp)) throw WrongBranchError("Painleve II: |q| exceeded 1e6; the solution left the Hastings-McLeod branch");
	dy[0] = y[1];
	dy[1] = s * y[0] + 2 * y[0] * y[0] * y[0];
}

int msize(const std::vector<double>& tau) { return int(tau.size()); }

State pack(const FlowState& f) {
	int m = int(f.q.rows());
	State y;
	y.reserve(5 * m * m + 1);
	for (const Eigen::MatrixXd* M : {&f.q, &f.dq, &f.qt, &f.dqt, &f.r})
		for (int j = 0; j < m; ++j)
			for (int i = 0; i < m; ++i) y.push_back((*M)(i, j));
	y.push_back(f.logdet);
	return y;
}

FlowState unpack(const State& y, int m, double xi) {
	FlowState f;
	f.xi = xi;
	int at = 0;
	for (Eigen::MatrixXd* M : {&f.q, &f.dq, &f.qt, &f.dqt, &f.r}) {
		M->resize(m, m);
		for (int j = 0; j < m; ++j)
			for (int i = 0; i < m; ++i) (*M)(i, j) = y[at++];
	}
	f.logdet = y[at];
	return f;
}

void check_shapes(const std::vector<double>& tau, const std::vector<double>& offsets) {
	if (tau.empty()) throw std::invalid_argument("airy system: at least one time is required");
	if (offsets.size() != tau.size()) throw std::invalid_argument("airy system: need one offset per time");
	for (size_t k = 1; k < tau.size(); ++k)
		if (!(tau[k - 1] < tau[k])) throw std::invalid_argument("airy system: times must be strictly increasing");
}

}  // namespace

PIITable integrate_pii_from(const PIIState& init, double s_end, double tol, double out_step, bool estimate) {
	if (!(s_end >= kLowest) || !(s_end < init.s)) throw std::invalid_argument("integrate_pii: need -8 <= s_end < s_start");
	if (!(tol > 0) || !(out_step > 0)) throw std::invalid_argument("integrate_pii: tolerance and step must be positive");
	PIITable tab;
	State y0{init.q, init.q_prime};
	run(pii_rhs, y0, descending_grid(init.s, s_end, out_step), tol,
	    [&](const State& y, double s) { tab.rows.push_back({s, y[0], y[1]}); });
	if (estimate) {
		State fine;
		run(pii_rhs, y0, {init.s, s_end}, tol / 100, [&](const State& y, double) { fine = y; });
		tab.error_estimate = std::max(std::fabs(fine[0] - tab.rows.back().q), std::fabs(fine[1] - tab.rows.back().q_prime));
	}
	return tab;
}

PIITable integrate_pii(double s_start, double s_end, double tol, double out_step, bool estimate) {
	if (!(s_start >= 4)) throw std::invalid_argument("integrate_pii: s_start must be >= 4");
	double ai, aip;
	specfun::airy(s_start, ai, aip);
	return integrate_pii_from({s_start, ai, aip}, s_end, tol, out_step, estimate);
}

FlowState airy_flow_init(const std::vector<double>& tau, const std::vector<double>& offsets, double xi, int order) {
	check_shapes(tau, offsets);
	KernelSpec spec;
	spec.kind = ProcessKind::Airy;
	spec.times = tau;
	std::vector<double> ends(offsets);
	for (double& e : ends) e += xi;
	auto op = discretize(spec, Region::right_tails(ends), order);
	BoundaryData bd = boundary_data(op);
	FlowState f;
	f.xi = xi;
	f.q = bd.q;
	f.qt = bd.qt;
	f.r = bd.r;
	// Dq = q' - r q and its dual
	f.dq = bd.qp - bd.r * bd.q;
	f.dqt = bd.qtp - bd.qt * bd.r;
	f.logdet = logdet(op, false).logdet;
	return f;
}

FlowState airy_flow_rhs(const std::vector<double>& tau, const std::vector<double>& offsets, const FlowState& s) {
	int m = msize(tau);
	Eigen::MatrixXd T = Eigen::Map<const Eigen::VectorXd>(tau.data(), m).asDiagonal();
	Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(offsets.data(), m).array() + s.xi;
	Eigen::MatrixXd X = xv.asDiagonal();
	Eigen::MatrixXd Th = Eigen::MatrixXd::Ones(m, m);
	Eigen::MatrixXd C = T * s.r - s.r * T;
	FlowState d;
	d.xi = s.xi;
	d.q = s.dq;
	d.qt = s.dqt;
	d.dq = X * s.q + 2 * s.q * Th * s.qt * s.q - 2 * C * s.q;
	d.dqt = s.qt * X + 2 * s.qt * s.q * Th * s.qt - 2 * s.qt * C;
	d.r = -s.q * Th * s.qt + C;
	d.logdet = s.r.trace();
	return d;
}

FlowTable integrate_airy_system(const std::vector<double>& tau, const std::vector<double>& offsets, double xi0, double xi1,
                                const FlowState& init, double tol, double out_step, bool estimate) {
	check_shapes(tau, offsets);
	int m = msize(tau);
	for (const Eigen::MatrixXd* M : {&init.q, &init.dq, &init.qt, &init.dqt, &init.r})
		if (M->rows() != m || M->cols() != m) throw std::invalid_argument("airy system: initial state has the wrong shape");
	if (!(xi1 < xi0)) throw std::invalid_argument("airy system: integrate downward, xi1 < xi0");
	if (!(tol > 0) || !(out_step > 0)) throw std::invalid_argument("airy system: tolerance and step must be positive");
	auto sys = [&](const State& y, State& dy, double xi) {
		for (double v : y)
			if (!(std::fabs(v) < kBlowUp)) throw WrongBranchError("airy system: state exceeded 1e6 in magnitude");
		dy = pack(airy_flow_rhs(tau, offsets, unpack(y, m, xi)));
	};
	FlowTable tab;
	run(sys, pack(init), descending_grid(xi0, xi1, out_step), tol,
	    [&](const State& y, double xi) { tab.rows.push_back(unpack(y, m, xi)); });
	if (estimate) {
		State fine;
		run(sys, pack(init), {xi0, xi1}, tol / 100, [&](const State& y, double) { fine = y; });
		State coarse = pack(tab.rows.back());
		for (size_t k = 0; k < fine.size(); ++k) tab.error_estimate = std::max(tab.error_estimate, std::fabs(fine[k] - coarse[k]));
	}
	return tab;
}

std::vector<TwRow> tw_table(const std::vector<double>& s_grid, double s_start, double tol) {
	if (s_grid.empty()) throw std::invalid_argument("tw_table: empty grid");
	if (!(s_start >= 4)) throw std::invalid_argument("tw_table: s_start must be >= 4");
	for (double s : s_grid)
		if (!(s >= kLowest && s <= s_start)) throw std::invalid_argument("tw_table: grid point outside [-8, s_start]");

	KernelSpec spec;
	spec.kind = ProcessKind::Airy;
	spec.times = {0.0};
	auto anchor = discretize(spec, Region::right_tails({s_start}));
	double r0 = boundary_data(anchor).r(0, 0), l0 = logdet(anchor, false).logdet;

	std::vector<double> order(s_grid);
	std::sort(order.begin(), order.end(), std::greater<>());
	order.erase(std::unique(order.begin(), order.end()), order.end());
	if (order.front() != s_start) order.insert(order.begin(), s_start);

	// y = (q, q', r, log F)
	auto sys = [](const State& y, State& dy, double s) {
		if (!(std::fabs(y[0]) < kBlowUp)) throw WrongBranchError("Painleve II: |q| exceeded 1e6");
		dy[0] = y[1];
		dy[1] = s * y[0] + 2 * y[0] * y[0] * y[0];
		dy[2] = -y[0] * y[0];
		dy[3] = y[2];
	};
	double ai, aip;
	specfun::airy(s_start, ai, aip);
	std::vector<std::pair<double, double>> logf;
	run(sys, State{ai, aip, r0, l0}, order, tol, [&](const State& y, double s) { logf.push_back({s, y[3]}); });

	std::vector<TwRow> out;
	for (double s : s_grid) {
		auto it = std::find_if(logf.begin(), logf.end(), [&](auto& p) { return p.first == s; });
		double fd = std::exp(logdet(discretize(spec, Region::right_tails({s})), false).logdet);
		out.push_back({s, fd, std::exp(it->second)});
	}
	return out;
}

}  // namespace dyson
