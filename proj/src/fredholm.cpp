#include "dyson/fredholm.hpp"

#include "dyson/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace dyson {

struct DiscretizedOperator::Cache {
	std::once_flag once;
	Eigen::PartialPivLU<Eigen::MatrixXd> lu;
	double min_pivot = 0, max_abs = 0, rcond = 1;
};

namespace {

// Where the one-time density has left its bulk; tails are searched outward from here.
double bulk_edge(const KernelSpec& s) {
	switch (s.kind) {
		case ProcessKind::Airy: return 0.0;
		case ProcessKind::Hermite: return std::sqrt(2.0 * *s.n + 1) + 1;
		case ProcessKind::Laguerre: return 4.0 * *s.n + 2 * *s.alpha + 2;
		default: return 0.0;
	}
}

// The cut is relative once the kernel is already small at the interval start, so that
// boundary data far out in the tail keep their relative accuracy.
double upper_tail(const KernelSpec& s, int k, double from) {
	double cut = kDiagonalCut;
	if (std::isfinite(from)) cut *= std::min(1.0, std::fabs(eval_entry(s, k, k, from, from)));
	cut = std::max(cut, 1e-280);
	double x = std::max(from, bulk_edge(s));
	for (int it = 0; it < 40000; ++it, x += 0.25)
		if (std::fabs(eval_entry(s, k, k, x, x)) < cut) return x;
	throw std::domain_error("fredholm: tail truncation point not found");
}

void append_interval(const KernelSpec& s, int k, double a, double b, int order, std::vector<double>& z, std::vector<double>& w,
                     std::vector<double>& tails) {
	bool tail = false;
	if (std::isinf(b)) {
		b = upper_tail(s, k, a);
		tails.push_back(b);
		tail = true;
		// a finite left end sitting beyond the cut contributes nothing measurable
		if (!(a < b)) return;
	}
	if (std::isinf(a)) {
		a = -upper_tail(s, k, -b);  // Hermite densities are even
		tails.push_back(a);
		tail = true;
		if (!(a < b)) return;
	}
	int panels = tail ? std::max(1, int(std::ceil((b - a) / 4))) : 1;
	append_panels(a, b, panels, order, z, w);
}

Deriv x_part(int o) { return o == 0 ? Deriv::None : (o == 1 ? Deriv::X : Deriv::XX); }
Deriv y_part(int o) { return o == 0 ? Deriv::None : (o == 1 ? Deriv::Y : Deriv::YY); }

void split(Deriv d, int& ox, int& oy) {
	switch (d) {
		case Deriv::None: ox = 0, oy = 0; break;
		case Deriv::X: ox = 1, oy = 0; break;
		case Deriv::Y: ox = 0, oy = 1; break;
		case Deriv::XX: ox = 2, oy = 0; break;
		case Deriv::XY: ox = 1, oy = 1; break;
		case Deriv::YY: ox = 0, oy = 2; break;
	}
}

std::vector<double> block_nodes(const DiscretizedOperator& op, int k) {
	return std::vector<double>(op.z.begin() + op.offset[k], op.z.begin() + op.offset[k + 1]);
}

// Rows sqrt(w_b) L_{k(e), k(b)}(x_e, z_b) for points (ks[e], xs[e]).
Eigen::MatrixXd row_factor(const DiscretizedOperator& op, const std::vector<int>& ks, const std::vector<double>& xs, Deriv d) {
	int N = op.size(), E = int(xs.size());
	Eigen::MatrixXd out = Eigen::MatrixXd::Zero(E, N);
	for (int i = 0; i < op.spec.m(); ++i) {
		std::vector<double> pts;
		std::vector<int> idx;
		for (int e = 0; e < E; ++e)
			if (ks[e] == i) pts.push_back(xs[e]), idx.push_back(e);
		if (pts.empty()) continue;
		for (int k = 0; k < op.spec.m(); ++k) {
			if (op.offset[k] == op.offset[k + 1]) continue;
			Eigen::MatrixXd blk = eval_block(op.spec, i, k, pts, block_nodes(op, k), d);
			for (size_t r = 0; r < idx.size(); ++r)
				for (int c = 0; c < blk.cols(); ++c) out(idx[r], op.offset[k] + c) = blk(r, c) * std::sqrt(op.w[op.offset[k] + c]);
		}
	}
	return out;
}

// Columns sqrt(w_a) L_{k(a), k(e)}(z_a, y_e).
Eigen::MatrixXd col_factor(const DiscretizedOperator& op, const std::vector<int>& ks, const std::vector<double>& ys, Deriv d) {
	int N = op.size(), E = int(ys.size());
	Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, E);
	for (int j = 0; j < op.spec.m(); ++j) {
		std::vector<double> pts;
		std::vector<int> idx;
		for (int e = 0; e < E; ++e)
			if (ks[e] == j) pts.push_back(ys[e]), idx.push_back(e);
		if (pts.empty()) continue;
		for (int k = 0; k < op.spec.m(); ++k) {
			if (op.offset[k] == op.offset[k + 1]) continue;
			Eigen::MatrixXd blk = eval_block(op.spec, k, j, block_nodes(op, k), pts, d);
			for (int r = 0; r < blk.rows(); ++r)
				for (size_t c = 0; c < idx.size(); ++c) out(op.offset[k] + r, idx[c]) = blk(r, c) * std::sqrt(op.w[op.offset[k] + r]);
		}
	}
	return out;
}

Eigen::MatrixXd direct(const KernelSpec& s, const std::vector<int>& ks, const std::vector<double>& xs, Deriv d) {
	int E = int(xs.size());
	Eigen::MatrixXd out(E, E);
	for (int a = 0; a < E; ++a)
		for (int b = 0; b < E; ++b) out(a, b) = eval_entry(s, ks[a], ks[b], xs[a], xs[b], d);
	return out;
}

Eigen::MatrixXd solve(const DiscretizedOperator& op, const Eigen::MatrixXd& rhs) {
	if (op.size() == 0) return rhs;
	return op.lu().solve(rhs);
}

}  // namespace

int DiscretizedOperator::block_of(int a) const {
	return int(std::upper_bound(offset.begin(), offset.end(), a) - offset.begin()) - 1;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& DiscretizedOperator::lu() const {
	std::call_once(cache->once, [this] {
		Eigen::MatrixXd A = Eigen::MatrixXd::Identity(size(), size()) - matrix;
		cache->max_abs = A.cwiseAbs().maxCoeff();
		cache->lu.compute(A);
		cache->min_pivot = cache->lu.matrixLU().diagonal().cwiseAbs().minCoeff();
		cache->rcond = cache->lu.rcond();
	});
	// partial pivoting can spread a rank deficiency over many moderate pivots, hence the rcond test
	if (cache->min_pivot < kNearSingular * cache->max_abs || cache->rcond < kNearSingular)
		throw NearSingularError("fredholm: I - K is numerically singular (smallest pivot " + std::to_string(cache->min_pivot) +
		                        ", rcond " + std::to_string(cache->rcond) + ")");
	return cache->lu;
}

DiscretizedOperator discretize(const KernelSpec& spec, const Region& region, int order) {
	spec.validate();
	region.validate(spec);
	if (order < 4) throw std::invalid_argument("fredholm: order must be at least 4");
	DiscretizedOperator op;
	op.spec = spec;
	op.region = region;
	op.order = order;
	op.cache = std::make_shared<DiscretizedOperator::Cache>();
	op.offset.push_back(0);
	for (int k = 0; k < spec.m(); ++k) {
		for (const auto& iv : region.sets[k]) append_interval(spec, k, iv.a, iv.b, order, op.z, op.w, op.tails);
		op.offset.push_back(int(op.z.size()));
	}
	int N = op.size(), m = spec.m();
	op.matrix.resize(N, N);
	std::vector<double> sw(N);
	for (int a = 0; a < N; ++a) sw[a] = std::sqrt(op.w[a]);
#pragma omp parallel for collapse(2) schedule(dynamic)
	for (int i = 0; i < m; ++i)
		for (int j = 0; j < m; ++j) {
			int ni = op.offset[i + 1] - op.offset[i], nj = op.offset[j + 1] - op.offset[j];
			if (ni == 0 || nj == 0) continue;
			Eigen::MatrixXd blk = eval_block(spec, i, j, block_nodes(op, i), block_nodes(op, j));
			for (int a = 0; a < ni; ++a)
				for (int b = 0; b < nj; ++b)
					op.matrix(op.offset[i] + a, op.offset[j] + b) = sw[op.offset[i] + a] * blk(a, b) * sw[op.offset[j] + b];
		}
	return op;
}

DetResult logdet(const DiscretizedOperator& op, bool estimate) {
	DetResult res;
	res.order_used = op.order;
	res.tails = op.tails;
	if (op.size() == 0) return res;
	const auto& lu = op.lu();
	double sum = 0;
	int sign = int(std::lround(lu.permutationP().determinant()));
	for (int a = 0; a < op.size(); ++a) {
		double u = lu.matrixLU()(a, a);
		if (u < 0) sign = -sign;
		sum += std::log(std::fabs(u));
	}
	if (sign < 0) throw NearSingularError("fredholm: det(I - K) is negative; the discretization is not trustworthy");
	res.logdet = sum;
	res.prob = std::exp(sum);
	if (estimate && op.order / 2 >= 4) {
		DetResult half = logdet(discretize(op.spec, op.region, op.order / 2), false);
		res.refinement_error_estimate = std::fabs(res.logdet - half.logdet);
	}
	return res;
}

double resolvent_at(const DiscretizedOperator& op, int i, int j, double x, double y, Deriv d) {
	int ox = 0, oy = 0;
	split(d, ox, oy);
	double val = eval_entry(op.spec, i, j, x, y, d);
	if (op.size() == 0) return val;
	Eigen::MatrixXd a = row_factor(op, {i}, {x}, x_part(ox));
	Eigen::MatrixXd b = col_factor(op, {j}, {y}, y_part(oy));
	return val + (a * op.lu().solve(b))(0, 0);
}

Eigen::VectorXd BoundaryData::xi() const {
	Eigen::VectorXd v(ends.size());
	for (size_t e = 0; e < ends.size(); ++e) v(e) = ends[e].xi;
	return v;
}

Eigen::VectorXd BoundaryData::s() const {
	Eigen::VectorXd v(ends.size());
	for (size_t e = 0; e < ends.size(); ++e) v(e) = ends[e].sign;
	return v;
}

BoundaryData boundary_data(const DiscretizedOperator& op) {
	const KernelSpec& S = op.spec;
	BoundaryData bd;
	bd.ends = op.region.endpoints();
	bd.m = S.m();
	bd.times = S.times;
	int E = int(bd.ends.size()), N = op.size(), m = S.m();
	std::vector<int> ks;
	std::vector<double> xs;
	for (const auto& e : bd.ends) ks.push_back(e.k), xs.push_back(e.xi);

	Eigen::MatrixXd Ar = row_factor(op, ks, xs, Deriv::None), Ar1 = row_factor(op, ks, xs, Deriv::X),
	                Ar2 = row_factor(op, ks, xs, Deriv::XX);
	Eigen::MatrixXd Bc = col_factor(op, ks, xs, Deriv::None), Bc1 = col_factor(op, ks, xs, Deriv::Y),
	                Bc2 = col_factor(op, ks, xs, Deriv::YY);
	Eigen::MatrixXd S0 = solve(op, Bc), S1 = solve(op, Bc1), S2 = solve(op, Bc2);

	bd.r = direct(S, ks, xs, Deriv::None) + Ar * S0;
	bd.rx = direct(S, ks, xs, Deriv::X) + Ar1 * S0;
	bd.ry = direct(S, ks, xs, Deriv::Y) + Ar * S1;
	bd.rxx = direct(S, ks, xs, Deriv::XX) + Ar2 * S0;
	bd.rxy = direct(S, ks, xs, Deriv::XY) + Ar1 * S1;
	bd.ryy = direct(S, ks, xs, Deriv::YY) + Ar * S2;

	if (S.kind == ProcessKind::Laguerre) return bd;
	BoundaryFunctions bf = boundary_functions(S);
	bd.has_p = bf.has_psi;

	// (I - K)^{-1} f and f (I - K)^{-1} extended to the endpoints, for f = phi or psi.
	auto fill = [&](auto f, auto fp, Eigen::MatrixXd& v, Eigen::MatrixXd& vp, Eigen::MatrixXd& vt, Eigen::MatrixXd& vtp) {
		Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, m);
		for (int a = 0; a < N; ++a) F(a, op.block_of(a)) = std::sqrt(op.w[a]) * f(op.z[a]);
		Eigen::MatrixXd G = solve(op, F);
		Eigen::MatrixXd D = Eigen::MatrixXd::Zero(E, m), Dp = Eigen::MatrixXd::Zero(E, m);
		for (int e = 0; e < E; ++e) D(e, ks[e]) = f(xs[e]), Dp(e, ks[e]) = fp(xs[e]);
		v = D + Ar * G;
		vp = Dp + Ar1 * G;
		vt = D.transpose() + F.transpose() * S0;
		vtp = Dp.transpose() + F.transpose() * S1;
	};
	fill([&](double x) { return bf.phi(x); }, [&](double x) { return bf.phi_prime(x); }, bd.q, bd.qp, bd.qt, bd.qtp);
	if (bd.has_p)
		fill([&](double x) { return bf.psi(x); }, [&](double x) { return bf.psi_prime(x); }, bd.p, bd.pp, bd.pt, bd.ptp);
	return bd;
}

Eigen::MatrixXd BoundaryData::tau() const {
	Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ends.size(), ends.size());
	for (size_t e = 0; e < ends.size(); ++e) t(e, e) = times[ends[e].k];
	return t;
}

Eigen::MatrixXd BoundaryData::tau_m() const {
	Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
	for (int k = 0; k < m; ++k) t(k, k) = times[k];
	return t;
}

Eigen::VectorXd grad_logdet(const DiscretizedOperator& op) {
	auto ends = op.region.endpoints();
	Eigen::VectorXd g(ends.size());
	for (size_t e = 0; e < ends.size(); ++e) g(e) = ends[e].sign * resolvent_at(op, ends[e].k, ends[e].k, ends[e].xi, ends[e].xi);
	return g;
}

}  // namespace dyson
