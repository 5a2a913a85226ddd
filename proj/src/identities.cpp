#include "dyson/identities.hpp"

#include "dyson/specfun.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace dyson {

namespace {

using Mat = Eigen::MatrixXd;

double maxabs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// The boundary data of one configuration with the diagonal matrices every identity uses.
struct Ctx {
	BoundaryData bd;
	std::vector<double> times;
	int E = 0, m = 0;
	Mat X, S, T, Th;
	std::vector<int> blk;  // time index of each endpoint

	// A transposed kernel is the same family with every time negated.
	explicit Ctx(BoundaryData b, bool transposed = false) : bd(std::move(b)), times(bd.times) {
		if (transposed)
			for (double& t : times) t = -t;
		E = int(bd.ends.size());
		m = bd.m;
		if (E == 0) throw std::invalid_argument("identities: the region has no finite endpoints");
		X = bd.xi().asDiagonal();
		S = bd.s().asDiagonal();
		T = Mat::Zero(E, E);
		for (int a = 0; a < E; ++a) T(a, a) = times[bd.ends[a].k];
		Th = Mat::Ones(m, m);
		for (const Endpoint& e : bd.ends) blk.push_back(e.k);
	}
	double tau(int a) const { return times[blk[a]]; }
	double xi(int a) const { return bd.ends[a].xi; }
	double s(int a) const { return bd.ends[a].sign; }
	bool same(int a, int b) const { return blk[a] == blk[b]; }
	template <class F>
	Mat te(F f) const {
		Mat d = Mat::Zero(E, E);
		for (int a = 0; a < E; ++a) d(a, a) = f(tau(a));
		return d;
	}
	template <class F>
	Mat tm(F f) const {
		Mat d = Mat::Zero(m, m);
		for (int k = 0; k < m; ++k) d(k, k) = f(times[k]);
		return d;
	}
};

BoundaryData data_at(const KernelSpec& spec, const Region& region, int order) {
	spec.validate();
	if (region.m() != spec.m()) throw std::invalid_argument("identities: region must list one set per time");
	region.validate(spec);
	return boundary_data(discretize(spec, region, order));
}

Ctx context(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	return Ctx(data_at(spec, region, o.order), spec.transposed);
}

void require_kind(const KernelSpec& s, ProcessKind k, const char* who) {
	if (s.kind != k) throw std::invalid_argument(std::string(who) + ": wrong process kind " + to_string(s.kind));
}

void require_hermite(const KernelSpec& s, const char* who) {
	require_kind(s, ProcessKind::Hermite, who);
	if (!s.hermite_shift) throw std::invalid_argument(std::string(who) + ": needs the shifted hermite kernel");
}

std::string config_of(const KernelSpec& spec, const Region& region) { return spec.fingerprint() + "|" + region.to_string(); }

ResidualReport report(const std::string& id, const IdentityOptions& o, double tol, const std::string& config) {
	ResidualReport r;
	r.identity_id = id;
	r.tolerance = o.tolerance > 0 ? o.tolerance : tol;
	r.config = config;
	return r;
}

// Largest |known - direct| over the entries the closure determines: cross-time entries of
// rx and ry, same-time off-diagonal entries when `same_time`, and the diagonal sums.
void compare_known(ResidualReport& rep, const Ctx& c, const KnownDerivs& k, bool same_time) {
	const auto& b = c.bd;
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d) {
				rep.add("diagonal_sum", std::fabs(k.rx(a, a) + k.ry(a, a) - b.rx(a, a) - b.ry(a, a)));
				continue;
			}
			if (c.same(a, d) && !same_time) continue;
			std::string tag = c.same(a, d) ? "_same_time" : "_cross_time";
			rep.add("rx" + tag, std::fabs(k.rx(a, d) - b.rx(a, d)));
			rep.add("ry" + tag, std::fabs(k.ry(a, d) - b.ry(a, d)));
		}
}

// ---------------------------------------------------------------- Airy

// r_x + r_y
Mat airy_sum(const Ctx& c) {
	const auto& b = c.bd;
	return -b.q * c.Th * b.qt + b.r * c.S * b.r + c.T * b.r - b.r * c.T;
}

// [tau, r_x - r_y]
Mat airy_difference(const Ctx& c) {
	const auto& b = c.bd;
	Mat C = c.T * b.r - b.r * c.T;
	Mat qq = b.q * c.Th * b.qt;
	return c.X * b.r - b.r * c.X + b.qp * c.Th * b.qt - b.q * c.Th * b.qtp + qq * c.S * b.r - b.r * c.S * qq - C * c.S * b.r +
	       b.r * c.S * C;
}

KnownDerivs airy_known(const Ctx& c) {
	const auto& b = c.bd;
	Mat U = airy_sum(c), W = airy_difference(c);
	KnownDerivs k{Mat::Zero(c.E, c.E), Mat::Zero(c.E, c.E)};
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d) {
				k.rx(a, a) = U(a, a);
			} else if (!c.same(a, d)) {
				double V = W(a, d) / (c.tau(a) - c.tau(d));
				k.rx(a, d) = 0.5 * (U(a, d) + V);
				k.ry(a, d) = 0.5 * (U(a, d) - V);
			}
		}
	// Same time, different endpoints: xi_a r_x + xi_d r_y + r is the (a, d) entry of [DM, R].
	Mat qq = b.q * c.Th * b.qt;
	Mat K = b.qp * c.Th * b.qtp - b.qp * c.Th * b.qt * c.S * b.r + U * c.S * qq - b.r * c.S * b.qp * c.Th * b.qt;
	Mat rsr = b.r * c.S * b.r;
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d || !c.same(a, d)) continue;
			double v = K(a, d) - (c.xi(a) + c.xi(d)) * qq(a, d) + c.xi(d) * rsr(a, d);
			for (int e = 0; e < c.E; ++e)
				if (!c.same(e, a)) v += 2 * c.s(e) * (c.tau(a) - c.tau(e)) * k.rx(a, e) * b.r(e, d);
			k.rx(a, d) = (v - b.r(a, d) - c.xi(d) * U(a, d)) / (c.xi(a) - c.xi(d));
			k.ry(a, d) = U(a, d) - k.rx(a, d);
		}
	return k;
}

// ---------------------------------------------------------------- Hermite

// e^{-tau} r_x + r_y e^{-tau} = A1 and e^{tau} r_x + r_y e^{tau} = A2
void hermite_sides(const Ctx& c, Mat& A1, Mat& A2) {
	const auto& b = c.bd;
	Mat em = c.te([](double t) { return std::exp(-t); }), ep = c.te([](double t) { return std::exp(t); });
	Mat emm = c.tm([](double t) { return std::exp(-t); }), epm = c.tm([](double t) { return std::exp(t); });
	A1 = -em * c.X * b.r + b.r * em * c.X - b.p * emm * c.Th * b.qt + b.r * c.S * em * b.r;
	A2 = ep * c.X * b.r - b.r * ep * c.X - b.q * c.Th * epm * b.pt + b.r * c.S * ep * b.r;
}

KnownDerivs hermite_known(const Ctx& c) {
	const auto& b = c.bd;
	Mat A1, A2;
	hermite_sides(c, A1, A2);
	KnownDerivs k{Mat::Zero(c.E, c.E), Mat::Zero(c.E, c.E)};
	Mat sum = Mat::Zero(c.E, c.E);
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			double ta = c.tau(a), td = c.tau(d);
			if (c.same(a, d)) {
				sum(a, d) = std::exp(ta) * A1(a, d);
				if (a == d) k.rx(a, a) = sum(a, a);
				continue;
			}
			double det = std::exp(td - ta) - std::exp(ta - td);
			k.rx(a, d) = (std::exp(td) * A1(a, d) - std::exp(-td) * A2(a, d)) / det;
			k.ry(a, d) = (std::exp(-ta) * A2(a, d) - std::exp(ta) * A1(a, d)) / det;
		}
	// Same time, u != v: the (a, d) entry of 2[MD, R].
	Mat epm = c.tm([](double t) { return std::exp(t); });
	Mat ep = c.te([](double t) { return std::exp(t); });
	Mat F = -b.q * c.Th * epm * b.pt + b.r * c.S * ep * b.r;
	Mat G = b.qp * c.Th * epm * b.pt - b.q * c.Th * epm * b.ptp;
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d || !c.same(a, d)) continue;
			double ti = c.tau(a), Z = 0;
			for (int e = 0; e < c.E; ++e) {
				double se = c.s(e), w = std::exp(c.tau(e) - ti);
				if (c.same(e, a))
					Z += se * (b.r(a, e) * sum(e, d) - sum(a, e) * b.r(e, d));
				else
					Z += se * (b.r(a, e) * k.rx(e, d) - w * k.rx(a, e) * b.r(e, d) - k.ry(a, e) * b.r(e, d) + w * b.r(a, e) * k.ry(e, d));
			}
			Z += 2 * (c.xi(a) * c.xi(a) - c.xi(d) * c.xi(d)) * b.r(a, d) + std::exp(-ti) * G(a, d) +
			     (c.xi(a) + c.xi(d)) * std::exp(-ti) * F(a, d);
			k.rx(a, d) = (0.5 * Z - b.r(a, d) - c.xi(d) * sum(a, d)) / (c.xi(a) - c.xi(d));
			k.ry(a, d) = sum(a, d) - k.rx(a, d);
		}
	return k;
}

// ---------------------------------------------------------------- sine

Mat sine_weights(const Ctx& c) {
	Mat W(c.m, c.m);
	for (int k = 0; k < c.m; ++k)
		for (int l = 0; l < c.m; ++l) W(k, l) = std::exp(c.times[k] - c.times[l]);
	return W;
}

// 2(tau r_x + r_y tau)
Mat sine_taud(const Ctx& c) {
	const auto& b = c.bd;
	Mat W = sine_weights(c);
	return b.p * W * b.qt - b.q * W * b.pt + c.X * b.r - b.r * c.X + 2 * b.r * c.S * c.T * b.r;
}

KnownDerivs sine_known(const Ctx& c) {
	const auto& b = c.bd;
	Mat sum = b.r * c.S * b.r, D = sine_taud(c);
	KnownDerivs k{Mat::Zero(c.E, c.E), Mat::Zero(c.E, c.E)};
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d) {
				k.rx(a, a) = sum(a, a);
			} else if (!c.same(a, d)) {
				k.rx(a, d) = (0.5 * D(a, d) - c.tau(d) * sum(a, d)) / (c.tau(a) - c.tau(d));
				k.ry(a, d) = sum(a, d) - k.rx(a, d);
			}
		}
	Mat W = sine_weights(c);
	Mat qp = b.p + b.r * c.S * b.q, pp = -b.q + b.r * c.S * b.p;
	Mat K = qp * W * b.pt - pp * W * b.qt;
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			if (a == d || !c.same(a, d)) continue;
			double v = K(a, d) + c.xi(d) * sum(a, d);
			for (int e = 0; e < c.E; ++e)
				if (!c.same(e, a)) v += 2 * c.s(e) * (c.tau(a) - c.tau(e)) * k.rx(a, e) * b.r(e, d);
			k.rx(a, d) = (v - b.r(a, d) - c.xi(d) * sum(a, d)) / (c.xi(a) - c.xi(d));
			k.ry(a, d) = sum(a, d) - k.rx(a, d);
		}
	return k;
}

// ---------------------------------------------------------------- systems

std::map<std::string, Mat> fields(const BoundaryData& b, ProcessKind kind) {
	std::map<std::string, Mat> f{{"r", b.r}, {"q", b.q}, {"qt", b.qt}};
	if (kind != ProcessKind::Sine) f["qp"] = b.qp, f["qtp"] = b.qtp;
	if (b.has_p) f["p"] = b.p, f["pt"] = b.pt;
	if (b.has_p && kind != ProcessKind::Sine) f["pp"] = b.pp, f["ptp"] = b.ptp;
	if (kind == ProcessKind::Bessel) f["rx"] = b.rx, f["ry"] = b.ry;
	return f;
}

// phi'' = V phi at the endpoints, with V acting on q (and on p where there is one).
void potentials(const KernelSpec& spec, const Ctx& c, Mat& Vq, Mat& Vqt, Mat& Vp, Mat& Vpt) {
	const auto& b = c.bd;
	Mat I = Mat::Identity(c.E, c.E);
	switch (spec.kind) {
		case ProcessKind::Airy:
			Vq = c.X * b.q;
			Vqt = b.qt * c.X;
			break;
		case ProcessKind::Hermite: {
			double n2 = 2.0 * *spec.n;
			Mat X2 = c.X * c.X;
			Vq = (X2 - (n2 + 1) * I) * b.q;
			Vqt = b.qt * (X2 - (n2 + 1) * I);
			Vp = (X2 - (n2 - 1) * I) * b.p;
			Vpt = b.pt * (X2 - (n2 - 1) * I);
			break;
		}
		case ProcessKind::Bessel: {
			double a = *spec.alpha, w = a * a - 0.25;
			Mat Xm2 = c.X.diagonal().array().pow(-2).matrix().asDiagonal();
			Vq = w * Xm2 * b.q - b.q;
			Vqt = w * b.qt * Xm2 - b.qt;
			Vp = w * Xm2 * b.p + 2 * b.q - b.p;
			Vpt = w * b.pt * Xm2 + 2 * b.qt - b.pt;
			break;
		}
		default: break;
	}
}

KnownDerivs known_for(const KernelSpec& spec, const Ctx& c) {
	switch (spec.kind) {
		case ProcessKind::Airy: return airy_known(c);
		case ProcessKind::Hermite: return hermite_known(c);
		case ProcessKind::Sine: return sine_known(c);
		case ProcessKind::Bessel: return {c.bd.rx, c.bd.ry};
		default: break;
	}
	throw std::invalid_argument("identities: no endpoint system for " + to_string(spec.kind));
}

std::map<std::string, Mat> predict(const KernelSpec& spec, const Ctx& c, const KnownDerivs& k, int e) {
	const auto& b = c.bd;
	Mat Dh = Mat::Zero(c.E, c.E);
	Dh(e, e) = 1;
	Mat Ds = c.s(e) * Dh;
	const Mat &rx = k.rx, &ry = k.ry, &S = c.S;
	std::map<std::string, Mat> out;
	out["r"] = -b.r * Ds * b.r + Dh * rx + ry * Dh;
	if (spec.kind == ProcessKind::Sine) {
		out["q"] = Dh * (b.p + b.r * S * b.q) - b.r * Ds * b.q;
		out["qt"] = (b.pt + b.qt * S * b.r) * Dh - b.qt * Ds * b.r;
		out["p"] = Dh * (-b.q + b.r * S * b.p) - b.r * Ds * b.p;
		out["pt"] = (-b.qt + b.pt * S * b.r) * Dh - b.pt * Ds * b.r;
		return out;
	}
	Mat Vq, Vqt, Vp, Vpt;
	potentials(spec, c, Vq, Vqt, Vp, Vpt);
	out["q"] = Dh * b.qp - b.r * Ds * b.q;
	out["qt"] = b.qtp * Dh - b.qt * Ds * b.r;
	out["qp"] = Dh * Vq - rx * Ds * b.q - Dh * ry * S * b.q + Dh * b.r * S * b.qp;
	out["qtp"] = Vqt * Dh - b.qt * Ds * ry - b.qt * S * rx * Dh + b.qtp * S * b.r * Dh;
	if (b.has_p) {
		out["p"] = Dh * b.pp - b.r * Ds * b.p;
		out["pt"] = b.ptp * Dh - b.pt * Ds * b.r;
		out["pp"] = Dh * Vp - rx * Ds * b.p - Dh * ry * S * b.p + Dh * b.r * S * b.pp;
		out["ptp"] = Vpt * Dh - b.pt * Ds * ry - b.pt * S * rx * Dh + b.ptp * S * b.r * Dh;
	}
	if (spec.kind == ProcessKind::Bessel) {
		out["rx"] = -b.rx * Ds * b.r + Dh * b.rxx + b.rxy * Dh;
		out["ry"] = -b.r * Ds * b.ry + Dh * b.rxy + b.ryy * Dh;
	}
	return out;
}

ResidualReport system_report(const std::string& id, const KernelSpec& spec, const Region& region, const IdentityOptions& o,
                             double tol) {
	ResidualReport rep = report(id, o, tol, config_of(spec, region));
	int E = int(region.endpoints().size());
	if (E == 0) throw std::invalid_argument("identities: the region has no finite endpoints");
	for (int e = 0; e < E; ++e) {
		PartialCheck pc = system_partials(spec, region, e, o);
		for (auto& [name, pred] : pc.predicted) rep.add("d" + name, maxabs(pred - pc.finite_difference.at(name)));
	}
	rep.finish();
	return rep;
}

// ---------------------------------------------------------------- Bessel

struct BesselFns {
	double alpha, beta, bp;
	double phi(double x) const { return specfun::phi_bessel(alpha, x); }
	double psi(double x) const { return specfun::phi_bessel(alpha + 1, x); }
};

BesselFns bessel_fns(const KernelSpec& s) {
	double a = *s.alpha, b = a + 0.5;
	return {a, b, b * (1 - b)};
}

// Omega_kl = e^{(tau_k - tau_l)/2}
Mat bessel_omega(const Ctx& c) {
	Mat W(c.m, c.m);
	for (int k = 0; k < c.m; ++k)
		for (int l = 0; l < c.m; ++l) W(k, l) = std::exp(0.5 * (c.times[k] - c.times[l]));
	return W;
}

}  // namespace

void ResidualReport::add(const std::string& name, double v) {
	if (!std::isfinite(v)) v = INFINITY;
	for (auto& p : parts)
		if (p.first == name) {
			p.second = std::max(p.second, v);
			return;
		}
	parts.emplace_back(name, v);
}

void ResidualReport::finish() {
	max_abs_residual = 0;
	for (auto& p : parts) max_abs_residual = std::max(max_abs_residual, p.second);
	pass = !inconclusive && max_abs_residual < tolerance;
}

std::string ResidualReport::to_json() const {
	nlohmann::ordered_json j;
	j["identity_id"] = identity_id;
	j["max_abs_residual"] = max_abs_residual;
	j["tolerance"] = tolerance;
	j["pass"] = pass;
	j["config"] = config;
	return j.dump();
}

KnownDerivs airy_known_rxry(const BoundaryData& bd) { return airy_known(Ctx(bd)); }
KnownDerivs hermite_known_rxry(const BoundaryData& bd) { return hermite_known(Ctx(bd)); }
KnownDerivs sine_known_rxry(const BoundaryData& bd) { return sine_known(Ctx(bd)); }

// ---------------------------------------------------------------- Airy reports

ResidualReport airy_endpoint_sum_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Airy, "airy_endpoint_sum_residual");
	Ctx c = context(spec, region, o);
	ResidualReport rep = report("airy.endpoint_sum", o, 1e-6, config_of(spec, region));
	rep.add("rx+ry", maxabs(c.bd.rx + c.bd.ry - airy_sum(c)));
	rep.finish();
	return rep;
}

ResidualReport airy_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Airy, "airy_closure_residual");
	Ctx c = context(spec, region, o);
	ResidualReport rep = report("airy.closure", o, 1e-6, config_of(spec, region));
	const auto& b = c.bd;
	Mat dif = b.rx - b.ry;
	rep.add("tau_commutator", maxabs(c.T * dif - dif * c.T - airy_difference(c)));
	compare_known(rep, c, airy_known(c), false);
	rep.finish();
	return rep;
}

ResidualReport airy_multiinterval_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Airy, "airy_multiinterval_closure_residual");
	Ctx c = context(spec, region, o);
	ResidualReport rep = report("airy.multiinterval_closure", o, 1e-5, config_of(spec, region));
	compare_known(rep, c, airy_known(c), true);
	rep.finish();
	return rep;
}

ResidualReport airy_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Airy, "airy_system_residual");
	return system_report("airy.system", spec, region, o, 1e-4);
}

ResidualReport airy_ode_residual(const KernelSpec& spec, const Region& region, double eps, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Airy, "airy_ode_residual");
	if (!(eps > 0)) throw std::invalid_argument("airy_ode_residual: eps must be positive");
	Ctx c = context(spec, region, o);
	BoundaryData up = data_at(spec, region.shifted(eps), o.order), dn = data_at(spec, region.shifted(-eps), o.order);
	const auto& b = c.bd;
	ResidualReport rep = report("airy.ode", o, 1e-4, config_of(spec, region));

	Mat C = c.T * b.r - b.r * c.T, qq = b.q * c.Th * b.qt;
	rep.add("Dr", maxabs((up.r - dn.r) / (2 * eps) - (-qq + C)));
	Mat d2q = (up.q - 2 * b.q + dn.q) / (eps * eps), d2qt = (up.qt - 2 * b.qt + dn.qt) / (eps * eps);
	rep.add("D2q", maxabs(d2q - (c.X * b.q + 2 * qq * c.S * b.q - 2 * C * c.S * b.q)));
	rep.add("D2qt", maxabs(d2qt - (b.qt * c.X + 2 * b.qt * c.S * qq - 2 * b.qt * c.S * C)));

	auto op = discretize(spec, region, o.order);
	double lu = logdet(discretize(spec, region.shifted(eps), o.order), false).logdet;
	double ld = logdet(discretize(spec, region.shifted(-eps), o.order), false).logdet;
	rep.add("Dlogdet", std::fabs((lu - ld) / (2 * eps) - (c.S * b.r).trace()));

	if (c.m == 1 && c.E == 1) {
		double q = b.q(0, 0), xi = c.xi(0);
		rep.add("painleve2", std::fabs(d2q(0, 0) - (xi * q + 2 * q * q * q)));
	}
	rep.finish();
	return rep;
}

// ---------------------------------------------------------------- Hermite reports

ResidualReport hermite_endpoint_relations_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_hermite(spec, "hermite_endpoint_relations_residual");
	Ctx c = context(spec, region, o);
	ResidualReport rep = report("hermite.endpoint_relations", o, 1e-6, config_of(spec, region));
	const auto& b = c.bd;
	Mat A1, A2;
	hermite_sides(c, A1, A2);
	Mat em = c.te([](double t) { return std::exp(-t); }), ep = c.te([](double t) { return std::exp(t); });
	rep.add("exp_minus", maxabs(em * b.rx + b.ry * em - A1));
	rep.add("exp_plus", maxabs(ep * b.rx + b.ry * ep - A2));
	compare_known(rep, c, hermite_known(c), false);
	rep.finish();
	return rep;
}

ResidualReport hermite_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_hermite(spec, "hermite_system_residual");
	return system_report("hermite.system", spec, region, o, 1e-4);
}

ResidualReport hermite_multiinterval_closure_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_hermite(spec, "hermite_multiinterval_closure_residual");
	Ctx c = context(spec, region, o);
	ResidualReport rep = report("hermite.multiinterval_closure", o, 1e-5, config_of(spec, region));
	compare_known(rep, c, hermite_known(c), true);
	rep.finish();
	return rep;
}

ResidualReport hermite_third_order_residual(int n, double xi, double h, const IdentityOptions& o) {
	if (!(h > 0)) throw std::invalid_argument("hermite_third_order_residual: h must be positive");
	KernelSpec spec;
	spec.kind = ProcessKind::Hermite;
	spec.times = {0.0};
	spec.n = n;
	Region base = Region::right_tails({xi});
	auto r = [&](double d) { return data_at(spec, base.shifted(d), o.order).r(0, 0); };
	double r0 = r(0), rp1 = r(h / 2), rm1 = r(-h / 2), rp2 = r(h), rm2 = r(-h), rp4 = r(2 * h), rm4 = r(-2 * h);
	auto d3 = [](double a2, double a1, double b1, double b2, double k) { return (a2 - 2 * a1 + 2 * b1 - b2) / (2 * k * k * k); };
	double third = (4 * d3(rp2, rp1, rm1, rm2, h / 2) - d3(rp4, rp2, rm2, rm4, h)) / 3;
	double first = (-rp2 + 8 * rp1 - 8 * rm1 + rm2) / (6 * h);
	ResidualReport rep = report("hermite.third_order", o, 1e-3, config_of(spec, base));
	rep.add("r'''", std::fabs(third - (4 * (xi * xi - 2.0 * n) * first - 4 * xi * r0 - 6 * first * first)));
	rep.finish();
	return rep;
}

// ---------------------------------------------------------------- sine reports

ResidualReport sine_relations_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Sine, "sine_relations_residual");
	Ctx c = context(spec, region, o);
	const auto& b = c.bd;
	ResidualReport rep = report("sine.relations", o, 1e-6, config_of(spec, region));
	rep.add("qp", maxabs(b.qp - (b.p + b.r * c.S * b.q)));
	rep.add("pp", maxabs(b.pp - (-b.q + b.r * c.S * b.p)));
	rep.add("qtp", maxabs(b.qtp - (b.pt + b.qt * c.S * b.r)));
	rep.add("ptp", maxabs(b.ptp - (-b.qt + b.pt * c.S * b.r)));
	rep.add("rx+ry", maxabs(b.rx + b.ry - b.r * c.S * b.r));
	rep.add("tau_D", maxabs(2 * (c.T * b.rx + b.ry * c.T) - sine_taud(c)));
	compare_known(rep, c, sine_known(c), true);
	rep.finish();
	return rep;
}

ResidualReport sine_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Sine, "sine_system_residual");
	return system_report("sine.system", spec, region, o, 1e-4);
}

ResidualReport sine_interval_residual(const KernelSpec& spec, const std::vector<double>& t_grid, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Sine, "sine_interval_residual");
	if (spec.m() != 1) throw std::invalid_argument("sine_interval_residual: needs m = 1");
	if (t_grid.empty()) throw std::invalid_argument("sine_interval_residual: empty grid");
	auto region = [](double t) {
		Region r = Region::empty_for(1);
		r.sets[0].push_back({-t, t});
		return r;
	};
	ResidualReport rep = report("sine.single_interval", o, 1e-5, config_of(spec, region(t_grid.front())));
	double h = o.fd_step;
	for (double t : t_grid) {
		if (!(t > h)) throw std::invalid_argument("sine_interval_residual: t must exceed the difference step");
		BoundaryData b = data_at(spec, region(t), o.order);
		// endpoint 0 is -t, endpoint 1 is t
		rep.add("q_odd", std::fabs(b.q(1, 0) + b.q(0, 0)));
		rep.add("p_even", std::fabs(b.p(1, 0) - b.p(0, 0)));
		rep.add("r_symmetric", std::fabs(b.r(0, 1) - b.r(1, 0)));
		double rbar = b.r(0, 1);
		double drdt = (data_at(spec, region(t + h), o.order).r(0, 0) - data_at(spec, region(t - h), o.order).r(0, 0)) / (2 * h);
		rep.add("dr/dt", std::fabs(drdt - 2 * rbar * rbar));
		rep.add("rbar", std::fabs(rbar + b.q(0, 0) * b.p(0, 0) / t));
	}
	rep.finish();
	return rep;
}

// ---------------------------------------------------------------- Bessel reports

ResidualReport bessel_commutators_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Bessel, "bessel_commutators_residual");
	Ctx c = context(spec, region, o);
	const auto& b = c.bd;
	BesselFns f = bessel_fns(spec);
	ResidualReport rep = report("bessel.commutators", o, 1e-5, config_of(spec, region));

	// (a) pointwise kernel identities at every pair of endpoints
	for (int a = 0; a < c.E; ++a)
		for (int d = 0; d < c.E; ++d) {
			int i = c.blk[a], j = c.blk[d];
			double x = c.xi(a), y = c.xi(d), ti = c.tau(a), tj = c.tau(d), W = std::exp(0.5 * (ti - tj));
			if (a == d) continue;
			auto P = [&](Deriv dv) { return bessel_pm_entry(spec, i, j, x, y, +1, dv); };
			auto N = [&](Deriv dv) { return bessel_pm_entry(spec, i, j, x, y, -1, dv); };
			double Lp = P(Deriv::None), Lpx = P(Deriv::X), Lpy = P(Deriv::Y);
			double Lm = N(Deriv::None), Lmx = N(Deriv::X), Lmy = N(Deriv::Y);
			double px = f.phi(x), py = f.phi(y), sx = f.psi(x), sy = f.psi(y);
			rep.add("pair_plus", std::fabs(Lpx + Lpy - f.beta * (1 / x + 1 / y) * Lm));
			rep.add("pair_minus", std::fabs(Lmx - Lmy - f.beta * (1 / x - 1 / y) * Lp));
			rep.add("pair_plus_tau", std::fabs(ti * Lpx + tj * Lpy - (x - y) * Lp - f.beta * (ti / x + tj / y) * Lm -
			                                   W * (px * sy - sx * py)));
			rep.add("pair_minus_tau", std::fabs(ti * Lmx - tj * Lmy - (x + y) * Lm - f.beta * (ti / x - tj / y) * Lp +
			                                    W * (px * sy + sx * py)));

			double L = eval_entry(spec, i, j, x, y), Lx = eval_entry_dx(spec, i, j, x, y), Ly = eval_entry_dy(spec, i, j, x, y);
			double Lxx = eval_entry_dxx(spec, i, j, x, y), Lyy = eval_entry_dyy(spec, i, j, x, y);
			double ix = 1 / (x * x), iy = 1 / (y * y);
			rep.add("L_commutator1", std::fabs(Lxx - Lyy + f.bp * (ix - iy) * L));
			rep.add("L_commutator2", std::fabs(ti * Lxx - tj * Lyy - (x * Lx + y * Ly + L) + f.bp * (ti * ix - tj * iy) * L +
			                                   W * px * py));
			rep.add("L_commutator3",
			        std::fabs(ti * ti * Lxx - tj * tj * Lyy - 2 * ti * x * Lx - 2 * tj * (L + y * Ly) - (ti - tj) * L +
			                  (x * x - y * y) * L + f.bp * (ti * ti * ix - tj * tj * iy) * L + W * (ti + tj) * px * py +
			                  W * (px * y * sy - x * sx * py)));
		}

	// (b) the three resolvent relations
	Mat W = bessel_omega(c), Tm = c.tm([](double t) { return t; });
	Mat Xm2 = c.X.diagonal().array().pow(-2).matrix().asDiagonal();
	Mat T2 = c.T * c.T, X2 = c.X * c.X;
	auto comm = [](const Mat& A, const Mat& B) -> Mat { return A * B - B * A; };
	const Mat &r = b.r, &S = c.S;
	Mat qWq = b.q * W * b.qt, WT = W * Tm + Tm * W;
	rep.add("R_relation1", maxabs(b.rxx - b.ryy + f.bp * comm(Xm2, r) - (r * S * b.rx - b.ry * S * r)));
	rep.add("R_relation2", maxabs(c.T * b.rxx - b.ryy * c.T - c.X * b.rx - b.ry * c.X - r + f.bp * comm(c.T * Xm2, r) -
	                              (-qWq + r * S * c.T * b.rx - b.ry * S * c.T * r - r * S * c.X * r)));
	rep.add("R_relation3",
	        maxabs(T2 * b.rxx - b.ryy * T2 - 2 * c.T * c.X * b.rx - 2 * b.ry * c.X * c.T - (c.T * r + r * c.T) + comm(X2, r) +
	               f.bp * comm(T2 * Xm2, r) -
	               (-b.q * WT * b.qt - b.q * W * b.pt + b.p * W * b.qt + r * S * T2 * b.rx - b.ry * S * T2 * r -
	                2 * r * S * c.T * c.X * r)));

	// (c) r_xy rebuilt from the linear system, one row endpoint at a time. The x-derivative of
	// relation3 - (ti + tj) relation2 + ti tj relation1 has no second derivatives left except r_xy.
	Mat A1 = r * S * b.rx - b.ry * S * r - f.bp * comm(Xm2, r);
	Mat A2 = -qWq + r * S * c.T * b.rx - b.ry * S * c.T * r - r * S * c.X * r + c.X * b.rx + b.ry * c.X + r -
	         f.bp * comm(c.T * Xm2, r);
	Mat QWq = b.qp * W * b.qt, QWTq = b.qp * WT * b.qt, QWp = b.qp * W * b.pt, PWq = b.pp * W * b.qt;
	double worst_cond = 0;
	for (int a = 0; a < c.E; ++a) {
		std::vector<int> out;
		for (int d = 0; d < c.E; ++d)
			if (!c.same(a, d)) out.push_back(d);
		if (out.empty()) continue;
		int K = int(out.size());
		double ti = c.tau(a), xa = c.xi(a);
		Mat M = Mat::Zero(K, K);
		Eigen::VectorXd rhs(K);
		for (int row = 0; row < K; ++row) {
			int d = out[row];
			double tj = c.tau(d), xd = c.xi(d);
			double rxx = (A2(a, d) - tj * A1(a, d)) / (ti - tj);
			double known = (ti - tj) * (b.rx(a, d) + xa * rxx) + (ti + tj) * QWq(a, d) - QWTq(a, d) - QWp(a, d) + PWq(a, d) -
			               2 * xa * r(a, d) - (xa * xa - xd * xd) * b.rx(a, d);
			for (int e = 0; e < c.E; ++e) {
				double te = c.tau(e);
				known += c.s(e) * c.xi(e) * ((ti + tj) - 2 * te) * b.rx(a, e) * r(e, d);
				known += c.s(e) * (te - ti) * (te - tj) * b.rx(a, e) * b.rx(e, d);
			}
			rhs(row) = -known;
			for (int col = 0; col < K; ++col) {
				int e = out[col];
				double te = c.tau(e);
				M(row, col) = -c.s(e) * (te - ti) * (te - tj) * r(e, d) + (e == d ? (tj - ti) * xd : 0.0);
			}
		}
		Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
		auto sv = svd.singularValues();
		double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
		worst_cond = std::max(worst_cond, cond);
		Eigen::VectorXd sol = svd.solve(rhs);
		for (int col = 0; col < K; ++col) rep.add("rxy_solve", std::fabs(sol(col) - b.rxy(a, out[col])));
	}
	rep.condition = worst_cond;
	rep.inconclusive = worst_cond > 1e8;
	rep.finish();
	return rep;
}

ResidualReport bessel_system_residual(const KernelSpec& spec, const Region& region, const IdentityOptions& o) {
	require_kind(spec, ProcessKind::Bessel, "bessel_system_residual");
	return system_report("bessel.system", spec, region, o, 1e-4);
}

ResidualReport bessel_mpsi_residual(double alpha, const std::vector<double>& xs) {
	if (!(alpha > -1)) throw std::invalid_argument("bessel_mpsi_residual: alpha must exceed -1");
	double beta = alpha + 0.5, bp = beta * (1 - beta);
	ResidualReport rep;
	rep.identity_id = "bessel.mpsi";
	rep.tolerance = 1e-8;
	rep.config = "bessel;alpha=" + std::to_string(alpha);
	for (double x : xs) {
		if (!(x > 0)) throw std::invalid_argument("bessel_mpsi_residual: points must be positive");
		double phi = specfun::phi_bessel(alpha, x), psi = specfun::phi_bessel(alpha + 1, x);
		// derivatives from the lowering and raising relations of J only
		double phi1 = -psi + beta * phi / x;
		double psi1 = phi - beta * psi / x;
		double psi2 = phi1 - beta * (psi1 / x - psi / (x * x));
		double mpsi2 = x * psi2 + 2 * psi1;
		rep.add("eigen", std::fabs(mpsi2 + bp / (x * x) * (x * psi) - (2 * phi - x * psi)));
	}
	rep.finish();
	return rep;
}

// ---------------------------------------------------------------- partials

PartialCheck system_partials(const KernelSpec& spec, const Region& region, int e, const IdentityOptions& o) {
	if (spec.kind == ProcessKind::Laguerre) throw std::invalid_argument("system_partials: no system for laguerre");
	Ctx c = context(spec, region, o);
	if (e < 0 || e >= c.E) throw std::out_of_range("system_partials: endpoint index out of range");
	PartialCheck pc;
	pc.predicted = predict(spec, c, known_for(spec, c), e);
	double h = o.fd_step;
	auto up = fields(data_at(spec, region.moved(e, h), o.order), spec.kind);
	auto dn = fields(data_at(spec, region.moved(e, -h), o.order), spec.kind);
	for (auto& [name, v] : up) pc.finite_difference[name] = (v - dn.at(name)) / (2 * h);
	return pc;
}

// ---------------------------------------------------------------- default matrix

std::vector<ResidualReport> run_suite(const std::string& suite) {
	if (suite != "all" && suite != "airy" && suite != "hermite" && suite != "sine" && suite != "bessel")
		throw std::invalid_argument("unknown suite: " + suite);
	auto want = [&](const char* s) { return suite == "all" || suite == s; };
	auto spec = [](ProcessKind k, std::vector<double> t) {
		KernelSpec s;
		s.kind = k;
		s.times = std::move(t);
		return s;
	};
	std::vector<ResidualReport> out;

	if (want("airy")) {
		KernelSpec a1 = spec(ProcessKind::Airy, {0.0}), a2 = spec(ProcessKind::Airy, {0.0, 1.0}),
		           a3 = spec(ProcessKind::Airy, {0.0, 0.4, 0.9});
		Region r1 = parse_region("1:(0,inf)", 1), r2 = parse_region("1:(-1,inf);2:(-0.5,inf)", 2),
		       r3 = parse_region("1:(-0.5,inf);2:(0,inf);3:(0.3,inf)", 3),
		       multi = parse_region("1:(-1.5,-0.5)+(0.5,inf);2:(-0.3,inf)", 2), multi1 = parse_region("1:(-2,-1)+(0,inf)", 1);
		out.push_back(airy_endpoint_sum_residual(a1, r1));
		out.push_back(airy_endpoint_sum_residual(a2, r2));
		out.push_back(airy_endpoint_sum_residual(a2, multi));
		out.push_back(airy_closure_residual(a2, r2));
		out.push_back(airy_closure_residual(a3, r3));
		out.push_back(airy_multiinterval_closure_residual(a2, multi));
		out.push_back(airy_multiinterval_closure_residual(a1, multi1));
		out.push_back(airy_system_residual(a2, r2));
		out.push_back(airy_system_residual(a2, multi));
		out.push_back(airy_ode_residual(a1, parse_region("1:(-1,inf)", 1)));
		out.push_back(airy_ode_residual(a2, r2));
	}
	if (want("hermite")) {
		KernelSpec h4 = spec(ProcessKind::Hermite, {0.0, 0.6}), h3 = spec(ProcessKind::Hermite, {0.0, 0.5}),
		           h1 = spec(ProcessKind::Hermite, {0.0});
		h4.n = 4;
		h3.n = 3;
		h1.n = 4;
		Region semi = parse_region("1:(1,inf);2:(0.5,inf)", 2), multi = parse_region("1:(-1,0)+(1,inf);2:(0.5,2)", 2);
		out.push_back(hermite_endpoint_relations_residual(h4, semi));
		out.push_back(hermite_endpoint_relations_residual(h1, parse_region("1:(1.5,inf)", 1)));
		out.push_back(hermite_system_residual(h3, semi));
		out.push_back(hermite_system_residual(h3, multi));
		out.push_back(hermite_multiinterval_closure_residual(h3, multi));
		out.push_back(hermite_third_order_residual(3, 1.0));
	}
	if (want("sine")) {
		KernelSpec s2 = spec(ProcessKind::Sine, {0.0, 0.5}), s1 = spec(ProcessKind::Sine, {0.0});
		s2.sine_scale = 1 / M_PI;
		s1.sine_scale = 1 / M_PI;
		KernelSpec unnormalized = spec(ProcessKind::Sine, {0.0, 0.5});
		Region two = parse_region("1:(-1,0.5)+(1,2);2:(-0.5,1)", 2);
		out.push_back(sine_relations_residual(s2, two));
		out.push_back(sine_relations_residual(unnormalized, parse_region("1:(-0.3,0.2);2:(0,0.4)", 2)));
		out.push_back(sine_relations_residual(s1, parse_region("1:(-1.2,1.2)", 1)));
		out.push_back(sine_system_residual(s2, two));
		std::vector<double> grid;
		for (double t = 0.5; t <= 3.0 + 1e-12; t += 0.25) grid.push_back(t);
		out.push_back(sine_interval_residual(s1, grid));
	}
	if (want("bessel")) {
		auto bes = [&](double a, std::vector<double> t) {
			KernelSpec s = spec(ProcessKind::Bessel, std::move(t));
			s.alpha = a;
			return s;
		};
		Region two = parse_region("1:(0.5,1.5)+(2,3);2:(1,2.5)", 2);
		out.push_back(bessel_commutators_residual(bes(0.5, {0.0, 0.5}), two));
		out.push_back(bessel_commutators_residual(bes(0.0, {0.0, 0.5}), two));
		out.push_back(bessel_commutators_residual(bes(2.0, {0.0, 0.5}), two));
		out.push_back(bessel_system_residual(bes(0.5, {0.0, 0.5}), two));
		out.push_back(bessel_system_residual(bes(0.0, {0.0}), parse_region("1:(0.5,2)", 1)));
		IdentityOptions loose;
		loose.tolerance = 1e-3;
		out.push_back(bessel_system_residual(bes(0.0, {0.0}), parse_region("1:(0.05,2)", 1), loose));
		out.push_back(bessel_mpsi_residual(0.0, {0.3, 1.0, 2.5, 7.0}));
		out.push_back(bessel_mpsi_residual(2.0, {0.3, 1.0, 2.5, 7.0}));
	}
	return out;
}

}  // namespace dyson
