#include "dyson/kernels.hpp"

#include "dyson/quadrature.hpp"
#include "dyson/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dyson {

namespace sf = specfun;

std::string to_string(ProcessKind k) {
	switch (k) {
		case ProcessKind::Airy: return "airy";
		case ProcessKind::Hermite: return "hermite";
		case ProcessKind::Sine: return "sine";
		case ProcessKind::Bessel: return "bessel";
		case ProcessKind::Laguerre: return "laguerre";
	}
	return "?";
}

ProcessKind parse_process(const std::string& s) {
	for (ProcessKind k : {ProcessKind::Airy, ProcessKind::Hermite, ProcessKind::Sine, ProcessKind::Bessel, ProcessKind::Laguerre})
		if (to_string(k) == s) return k;
	throw std::invalid_argument("unknown process kind '" + s + "'");
}

void KernelSpec::validate() const {
	if (times.empty()) throw std::invalid_argument("KernelSpec: at least one time is required (m >= 1)");
	for (double t : times)
		if (!std::isfinite(t)) throw std::invalid_argument("KernelSpec: times must be finite");
	for (size_t k = 1; k < times.size(); ++k)
		if (!(times[k - 1] < times[k])) throw std::invalid_argument("KernelSpec: times must be strictly increasing");
	bool needs_n = kind == ProcessKind::Hermite || kind == ProcessKind::Laguerre;
	bool needs_alpha = kind == ProcessKind::Bessel || kind == ProcessKind::Laguerre;
	if (needs_n != n.has_value())
		throw std::invalid_argument(needs_n ? "KernelSpec: n is required for " + to_string(kind)
		                                    : "KernelSpec: n is not a parameter of " + to_string(kind));
	if (needs_alpha != alpha.has_value())
		throw std::invalid_argument(needs_alpha ? "KernelSpec: alpha is required for " + to_string(kind)
		                                        : "KernelSpec: alpha is not a parameter of " + to_string(kind));
	if (n && (*n < 1 || *n > sf::kDefaultKMax)) throw std::invalid_argument("KernelSpec: n must lie in [1, k_max]");
	if (kind == ProcessKind::Bessel && !(*alpha >= -0.5)) throw std::invalid_argument("KernelSpec: Bessel alpha must be >= -1/2");
	if (kind == ProcessKind::Laguerre && !(*alpha > -1)) throw std::invalid_argument("KernelSpec: Laguerre alpha must exceed -1");
	if (!(sine_scale > 0) || !std::isfinite(sine_scale)) throw std::invalid_argument("KernelSpec: sine_scale must be positive");
	if (kind != ProcessKind::Sine && sine_scale != 1.0) throw std::invalid_argument("KernelSpec: sine_scale applies to the sine kernel only");
}

std::string KernelSpec::fingerprint() const {
	std::ostringstream os;
	os.precision(17);
	os << to_string(kind) << ";times=";
	for (size_t k = 0; k < times.size(); ++k) os << (k ? "," : "") << times[k];
	if (n) os << ";n=" << *n;
	if (alpha) os << ";alpha=" << *alpha;
	if (kind == ProcessKind::Hermite && !hermite_shift) os << ";unshifted";
	if (sine_scale != 1.0) os << ";scale=" << sine_scale;
	if (transposed) os << ";transposed";
	return os.str();
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelNodes = 20;
// e^{-kExpCut} is treated as zero in tail truncations.
constexpr double kExpCut = 39.0;

void orders(Deriv d, int& ox, int& oy) {
	switch (d) {
		case Deriv::None: ox = 0, oy = 0; break;
		case Deriv::X: ox = 1, oy = 0; break;
		case Deriv::Y: ox = 0, oy = 1; break;
		case Deriv::XX: ox = 2, oy = 0; break;
		case Deriv::XY: ox = 1, oy = 1; break;
		case Deriv::YY: ox = 0, oy = 2; break;
	}
}

Deriv swap_xy(Deriv d) {
	switch (d) {
		case Deriv::X: return Deriv::Y;
		case Deriv::Y: return Deriv::X;
		case Deriv::XX: return Deriv::YY;
		case Deriv::YY: return Deriv::XX;
		default: return d;
	}
}

int pow2_at_least(double v) {
	int p = 1;
	while (p < v && p < (1 << 20)) p <<= 1;
	return p;
}

void check_args(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys) {
	if (i < 0 || j < 0 || i >= s.m() || j >= s.m()) throw std::out_of_range("kernel: time index out of range");
	auto chk = [&](double v) {
		if (!std::isfinite(v)) throw std::domain_error("kernel: non-finite argument");
		if (s.domain_positive() && !(v > 0)) throw std::domain_error("kernel: argument outside (0, inf) for " + to_string(s.kind));
	};
	for (double v : xs) chk(v);
	for (double v : ys) chk(v);
}

// ---------- Airy ----------

int airy_panels(double delta, double x, double y) {
	double t = std::max(0.0, -delta);
	double lo = std::min(x, y);
	for (int Z = 1; Z < 4000; ++Z) {
		double u = lo + Z;
		if (u < std::max(1.0, t * t)) continue;
		if (Z * t - 4.0 / 3.0 * u * std::sqrt(u) - std::log(4 * kPi * std::sqrt(u)) < -kExpCut) return Z;
	}
	throw std::domain_error("airy kernel: truncation point not found");
}

struct AiryGauss {
	double v, dx, dy, dxx, dxy, dyy;
};

// Integral of e^{zt}Ai(x+z)Ai(y+z) over the whole line, t > 0.
AiryGauss airy_gauss(double t, double x, double y) {
	double E = t * t * t / 12 - (x + y) * t / 2 - (x - y) * (x - y) / (4 * t);
	double Ex = -t / 2 - (x - y) / (2 * t), Ey = -t / 2 + (x - y) / (2 * t);
	double E2 = -1 / (2 * t), Exy = 1 / (2 * t);
	double G = std::exp(E) / std::sqrt(4 * kPi * t);
	return {G, G * Ex, G * Ey, G * (Ex * Ex + E2), G * (Ex * Ey + Exy), G * (Ey * Ey + E2)};
}

double pick(const AiryGauss& g, Deriv d) {
	switch (d) {
		case Deriv::None: return g.v;
		case Deriv::X: return g.dx;
		case Deriv::Y: return g.dy;
		case Deriv::XX: return g.dxx;
		case Deriv::XY: return g.dxy;
		case Deriv::YY: return g.dyy;
	}
	return 0;
}

double airy_f(double u, int o) {
	double a, ap;
	sf::airy(u, a, ap);
	return o == 0 ? a : (o == 1 ? ap : u * a);
}

Eigen::MatrixXd airy_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                           Deriv d) {
	int ox = 0, oy = 0;
	orders(d, ox, oy);
	double delta = s.times[i] - s.times[j];
	size_t na = xs.size(), nb = ys.size();
	Eigen::MatrixXi lev(na, nb);
	int maxlev = 1;
	for (size_t a = 0; a < na; ++a)
		for (size_t b = 0; b < nb; ++b) {
			lev(a, b) = airy_panels(delta, xs[a], ys[b]);
			maxlev = std::max(maxlev, lev(a, b));
		}
	std::vector<double> z, w;
	append_panels(0.0, maxlev, maxlev, kPanelNodes, z, w);
	size_t nz = z.size();
	for (size_t l = 0; l < nz; ++l) w[l] *= std::exp(-z[l] * delta);
	Eigen::MatrixXd fx(nz, na), fy(nz, nb);
	for (size_t a = 0; a < na; ++a)
		for (size_t l = 0; l < nz; ++l) fx(l, a) = airy_f(xs[a] + z[l], ox);
	for (size_t b = 0; b < nb; ++b)
		for (size_t l = 0; l < nz; ++l) fy(l, b) = w[l] * airy_f(ys[b] + z[l], oy);
	Eigen::MatrixXd out(na, nb);
	for (size_t a = 0; a < na; ++a)
		for (size_t b = 0; b < nb; ++b) {
			int len = lev(a, b) * kPanelNodes;
			double acc = 0;
			for (int l = 0; l < len; ++l) acc += fx(l, a) * fy(l, b);
			if (delta < 0) acc -= pick(airy_gauss(-delta, xs[a], ys[b]), d);
			out(a, b) = acc;
		}
	return out;
}

// ---------- sine ----------

double sine_entry(double delta, double u, Deriv d) {
	double lo, hi;
	int P;
	double sign = 1;
	if (delta >= 0) {
		lo = 0, hi = 1;
		P = int(std::max({1.0, std::ceil(std::fabs(u) / 4), std::ceil(delta / 5)}));
	} else {
		double Z = std::sqrt(2 * kExpCut / -delta);
		if (Z <= 1) return 0.0;
		lo = 1, hi = Z;
		sign = -1;
		P = int(std::ceil((Z - 1) * std::max({1.0, std::fabs(u) / 4, std::sqrt(2 * kExpCut * -delta) / 5})));
	}
	const GaussRule& g = gauss_legendre(kPanelNodes);
	double h = (hi - lo) / P, acc = 0;
	for (int p = 0; p < P; ++p) {
		double mid = lo + (p + 0.5) * h;
		for (int l = 0; l < kPanelNodes; ++l) {
			double z = mid + 0.5 * h * g.x[l];
			double wt = 0.5 * h * g.w[l] * std::exp(z * z * delta);
			double f;
			switch (d) {
				case Deriv::None: f = std::cos(z * u); break;
				case Deriv::X: f = -z * std::sin(z * u); break;
				case Deriv::Y: f = z * std::sin(z * u); break;
				case Deriv::XY: f = z * z * std::cos(z * u); break;
				default: f = -z * z * std::cos(z * u); break;
			}
			acc += wt * f;
		}
	}
	return sign * acc;
}

Eigen::MatrixXd sine_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                           Deriv d) {
	double delta = s.times[i] - s.times[j];
	Eigen::MatrixXd out(xs.size(), ys.size());
	for (size_t a = 0; a < xs.size(); ++a)
		for (size_t b = 0; b < ys.size(); ++b) out(a, b) = s.sine_scale * sine_entry(delta, xs[a] - ys[b], d);
	return out;
}

// ---------- Bessel ----------

struct BesselRule {
	std::vector<double> z, w;
};

int bessel_level(double delta, double x, double y, double& Z) {
	double mx = std::max(x, y);
	if (delta >= 0) {
		Z = 1;
		return pow2_at_least(std::max({1.0, mx / 4, delta / 10}));
	}
	Z = std::sqrt(4 * kExpCut / -delta);
	if (Z <= 1) return 0;
	return pow2_at_least((Z - 1) * std::max({1.0, mx / 4, std::sqrt(4 * kExpCut * -delta) / 5}));
}

BesselRule bessel_rule(double delta, int P) {
	BesselRule r;
	if (delta >= 0) {
		append_panels(0.0, 1.0, P, kPanelNodes, r.z, r.w);
		for (size_t l = 0; l < r.z.size(); ++l) r.w[l] *= std::exp(r.z[l] * r.z[l] * delta / 2);
	} else {
		double Z = std::sqrt(4 * kExpCut / -delta);
		append_panels(1.0, Z, P, kPanelNodes, r.z, r.w);
		for (size_t l = 0; l < r.z.size(); ++l) r.w[l] *= -std::exp(r.z[l] * r.z[l] * delta / 2);
	}
	return r;
}

// d^o/dx^o of Phi_nu(xz), nu = alpha or alpha + 1 (upper = true).
double bessel_f(double alpha, bool upper, double x, double z, int o) {
	double t = x * z;
	double a0 = sf::phi_bessel(alpha, t);
	double beta = alpha + 0.5;
	if (!upper) {
		if (o == 0) return a0;
		if (o == 1) return z * (-sf::phi_bessel(alpha + 1, t) + beta * a0 / t);
		return z * z * (-1 + (alpha * alpha - 0.25) / (t * t)) * a0;
	}
	double a1 = sf::phi_bessel(alpha + 1, t);
	if (o == 0) return a1;
	if (o == 1) return z * (a0 - beta * a1 / t);
	double nu = alpha + 1;
	return z * z * (-1 + (nu * nu - 0.25) / (t * t)) * a1;
}

// pm = 0: plain kernel; pm = +1/-1: L^+ / L^-.
Eigen::MatrixXd bessel_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                             Deriv d, int pm) {
	int ox = 0, oy = 0;
	orders(d, ox, oy);
	double alpha = *s.alpha;
	double delta = s.times[i] - s.times[j];
	size_t na = xs.size(), nb = ys.size();
	Eigen::MatrixXi lev(na, nb);
	std::map<int, int> levels;
	for (size_t a = 0; a < na; ++a)
		for (size_t b = 0; b < nb; ++b) {
			double Z;
			lev(a, b) = bessel_level(delta, xs[a], ys[b], Z);
			if (lev(a, b) > 0) levels[lev(a, b)] = 0;
		}
	Eigen::MatrixXd out = Eigen::MatrixXd::Zero(na, nb);
	for (auto& [P, unused] : levels) {
		(void)unused;
		BesselRule r = bessel_rule(delta, P);
		size_t nz = r.z.size();
		Eigen::MatrixXd fx(nz, na), fy(nz, nb), gx, gy;
		for (size_t a = 0; a < na; ++a)
			for (size_t l = 0; l < nz; ++l) fx(l, a) = bessel_f(alpha, false, xs[a], r.z[l], ox);
		for (size_t b = 0; b < nb; ++b)
			for (size_t l = 0; l < nz; ++l) fy(l, b) = r.w[l] * bessel_f(alpha, false, ys[b], r.z[l], oy);
		if (pm != 0) {
			gx.resize(nz, na);
			gy.resize(nz, nb);
			for (size_t a = 0; a < na; ++a)
				for (size_t l = 0; l < nz; ++l) gx(l, a) = bessel_f(alpha, true, xs[a], r.z[l], ox);
			for (size_t b = 0; b < nb; ++b)
				for (size_t l = 0; l < nz; ++l) gy(l, b) = pm * r.w[l] * bessel_f(alpha, true, ys[b], r.z[l], oy);
		}
		for (size_t a = 0; a < na; ++a)
			for (size_t b = 0; b < nb; ++b) {
				if (lev(a, b) != P) continue;
				double acc = 0;
				for (size_t l = 0; l < nz; ++l) acc += fx(l, a) * fy(l, b);
				if (pm != 0)
					for (size_t l = 0; l < nz; ++l) acc += gx(l, a) * gy(l, b);
				out(a, b) = acc;
			}
	}
	return out;
}

// ---------- Hermite ----------

// Rows: points; columns: k = 0..kn-1; derivative order o.
Eigen::MatrixXd hermite_table(const std::vector<double>& xs, int kn, int o) {
	Eigen::MatrixXd T(xs.size(), kn);
	std::vector<double> t(kn + 1);
	for (size_t a = 0; a < xs.size(); ++a) {
		double x = xs[a];
		sf::hermite_phi_table(kn, x, t.data(), std::max(kn, sf::kDefaultKMax));
		for (int k = 0; k < kn; ++k) {
			if (o == 0)
				T(a, k) = t[k];
			else if (o == 1)
				T(a, k) = (k > 0 ? std::sqrt(k / 2.0) * t[k - 1] : 0.0) - std::sqrt((k + 1) / 2.0) * t[k + 1];
			else
				T(a, k) = (x * x - 2 * k - 1) * t[k];
		}
	}
	return T;
}

Eigen::MatrixXd hermite_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                              Deriv d) {
	int ox = 0, oy = 0;
	orders(d, ox, oy);
	int n = *s.n;
	double delta = s.times[i] - s.times[j];
	double shift = s.hermite_shift ? n : 0;
	Eigen::MatrixXd TX = hermite_table(xs, n, ox), TY = hermite_table(ys, n, oy);
	Eigen::VectorXd c(n);
	for (int k = 0; k < n; ++k) c(k) = std::exp((k - shift) * delta);
	Eigen::MatrixXd fin = TX * c.asDiagonal() * TY.transpose();
	if (delta >= 0) return fin;
	double sigma = std::exp(delta), scale = std::exp(-shift * delta);
	Eigen::MatrixXd out(xs.size(), ys.size());
	for (size_t a = 0; a < xs.size(); ++a)
		for (size_t b = 0; b < ys.size(); ++b) {
			sf::Bilinear m = sf::mehler_phi_sum(sigma, xs[a], ys[b]);
			double full = 0;
			switch (d) {
				case Deriv::None: full = m.v; break;
				case Deriv::X: full = m.dx; break;
				case Deriv::Y: full = m.dy; break;
				case Deriv::XX: full = m.dxx; break;
				case Deriv::XY: full = m.dxy; break;
				case Deriv::YY: full = m.dyy; break;
			}
			out(a, b) = -(scale * full - fin(a, b));
		}
	return out;
}

// ---------- Laguerre ----------

Eigen::MatrixXd laguerre_table(double alpha, const std::vector<double>& xs, int k0, int k1, int o) {
	Eigen::MatrixXd T(xs.size(), k1 - k0);
	std::vector<double> t(k1);
	for (size_t a = 0; a < xs.size(); ++a) {
		double x = xs[a];
		sf::laguerre_phi_table(alpha, k1 - 1, x, t.data(), std::max(k1, sf::kDefaultKMax));
		for (int k = k0; k < k1; ++k) {
			double u = t[k];
			double up = (alpha / (2 * x) - 0.5) * u + (k * u - (k > 0 ? std::sqrt(k * (k + alpha)) * t[k - 1] : 0.0)) / x;
			if (o == 0)
				T(a, k - k0) = u;
			else if (o == 1)
				T(a, k - k0) = up;
			else
				T(a, k - k0) = -(up + (k + (alpha + 1) / 2 - x / 4 - alpha * alpha / (4 * x)) * u) / x;
		}
	}
	return T;
}

int laguerre_tail_end(int n, double delta) {
	double K = n + std::ceil(kExpCut / (2 * -delta)) + 10;
	if (K > 20000) throw std::domain_error("laguerre kernel: time separation too small for the tail series");
	return int(K);
}

Eigen::MatrixXd laguerre_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                               Deriv d) {
	int ox = 0, oy = 0;
	orders(d, ox, oy);
	int n = *s.n;
	double alpha = *s.alpha;
	double delta = s.times[i] - s.times[j];
	if (delta >= 0 || d != Deriv::None) {
		int k0 = delta >= 0 ? 0 : n, k1 = delta >= 0 ? n : laguerre_tail_end(n, delta);
		Eigen::MatrixXd TX = laguerre_table(alpha, xs, k0, k1, ox), TY = laguerre_table(alpha, ys, k0, k1, oy);
		Eigen::VectorXd c(k1 - k0);
		for (int k = k0; k < k1; ++k) c(k - k0) = std::exp(2 * k * delta);
		Eigen::MatrixXd S = TX * c.asDiagonal() * TY.transpose();
		return delta >= 0 ? S : Eigen::MatrixXd(-S);
	}
	Eigen::MatrixXd TX = laguerre_table(alpha, xs, 0, n, 0), TY = laguerre_table(alpha, ys, 0, n, 0);
	Eigen::VectorXd c(n);
	for (int k = 0; k < n; ++k) c(k) = std::exp(2 * k * delta);
	Eigen::MatrixXd fin = TX * c.asDiagonal() * TY.transpose();
	double q = std::exp(delta);
	Eigen::MatrixXd out(xs.size(), ys.size());
	for (size_t a = 0; a < xs.size(); ++a)
		for (size_t b = 0; b < ys.size(); ++b) out(a, b) = -(sf::hille_hardy_phi_sum(q, alpha, xs[a], ys[b]) - fin(a, b));
	return out;
}

Eigen::MatrixXd raw_block(const KernelSpec& s, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                          Deriv d) {
	switch (s.kind) {
		case ProcessKind::Airy: return airy_block(s, i, j, xs, ys, d);
		case ProcessKind::Sine: return sine_block(s, i, j, xs, ys, d);
		case ProcessKind::Bessel: return bessel_block(s, i, j, xs, ys, d, 0);
		case ProcessKind::Hermite: return hermite_block(s, i, j, xs, ys, d);
		case ProcessKind::Laguerre: return laguerre_block(s, i, j, xs, ys, d);
	}
	return {};
}

}  // namespace

Eigen::MatrixXd eval_block(const KernelSpec& spec, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                           Deriv d) {
	check_args(spec, i, j, xs, ys);
	if (xs.empty() || ys.empty()) return Eigen::MatrixXd(xs.size(), ys.size());
	if (spec.transposed) return raw_block(spec, j, i, ys, xs, swap_xy(d)).transpose();
	return raw_block(spec, i, j, xs, ys, d);
}

double eval_entry(const KernelSpec& spec, int i, int j, double x, double y, Deriv d) {
	return eval_block(spec, i, j, {x}, {y}, d)(0, 0);
}

double bessel_pm_entry(const KernelSpec& spec, int i, int j, double x, double y, int sign, Deriv d) {
	if (spec.kind != ProcessKind::Bessel) throw std::invalid_argument("bessel_pm_entry: Bessel kernel required");
	check_args(spec, i, j, {x}, {y});
	return bessel_block(spec, i, j, {x}, {y}, d, sign >= 0 ? 1 : -1)(0, 0);
}

double airy_lower_direct(const KernelSpec& spec, int i, int j, double x, double y, Deriv d) {
	if (spec.kind != ProcessKind::Airy) throw std::invalid_argument("airy_lower_direct: Airy kernel required");
	check_args(spec, i, j, {x}, {y});
	double t = spec.times[j] - spec.times[i];
	if (!(t > 0)) throw std::invalid_argument("airy_lower_direct: requires i < j");
	int ox = 0, oy = 0;
	orders(d, ox, oy);
	double Z = (kExpCut + 2) / t;
	int P = int(std::ceil(Z * std::sqrt(Z + std::max(std::fabs(x), std::fabs(y)) + 1) / 3));
	std::vector<double> z, w;
	append_panels(-Z, 0.0, P, kPanelNodes, z, w);
	double acc = 0;
	for (size_t l = 0; l < z.size(); ++l) acc += w[l] * std::exp(z[l] * t) * airy_f(x + z[l], ox) * airy_f(y + z[l], oy);
	return -acc;
}

KernelEntryPlan entry_plan(const KernelSpec& s, int i, int j, double x, double y) {
	check_args(s, i, j, {x}, {y});
	double delta = s.times[i] - s.times[j];
	using S = KernelEntryPlan::Strategy;
	switch (s.kind) {
		case ProcessKind::Hermite:
		case ProcessKind::Laguerre:
			return delta >= 0 ? KernelEntryPlan{S::FiniteSum, double(*s.n), 0} : KernelEntryPlan{S::ClosedFormMinusFiniteSum, double(*s.n), 0};
		case ProcessKind::Airy: {
			int Z = airy_panels(delta, x, y);
			return {S::TruncatedQuadrature, double(Z), Z * kPanelNodes};
		}
		case ProcessKind::Sine: {
			double Z = delta >= 0 ? 1.0 : std::sqrt(2 * kExpCut / -delta);
			return {S::TruncatedQuadrature, Z, 0};
		}
		case ProcessKind::Bessel: {
			double Z;
			int P = bessel_level(delta, x, y, Z);
			return {S::TruncatedQuadrature, Z, P * kPanelNodes};
		}
	}
	return {};
}

double BoundaryFunctions::phi(double x) const {
	switch (spec.kind) {
		case ProcessKind::Airy: return sf::airy_ai(x);
		case ProcessKind::Hermite: return std::pow(2.0 * *spec.n, 0.25) * sf::hermite_phi(*spec.n, x);
		case ProcessKind::Sine: return std::sqrt(spec.sine_scale) * std::sin(x);
		case ProcessKind::Bessel: return sf::phi_bessel(*spec.alpha, x);
		case ProcessKind::Laguerre: break;
	}
	throw std::invalid_argument("boundary functions are not defined for " + to_string(spec.kind));
}

double BoundaryFunctions::phi_prime(double x) const {
	switch (spec.kind) {
		case ProcessKind::Airy: return sf::airy_ai_prime(x);
		case ProcessKind::Hermite: return std::pow(2.0 * *spec.n, 0.25) * sf::hermite_phi_prime(*spec.n, x);
		case ProcessKind::Sine: return std::sqrt(spec.sine_scale) * std::cos(x);
		case ProcessKind::Bessel: return sf::phi_bessel_prime(*spec.alpha, x);
		case ProcessKind::Laguerre: break;
	}
	throw std::invalid_argument("boundary functions are not defined for " + to_string(spec.kind));
}

double BoundaryFunctions::psi(double x) const {
	switch (spec.kind) {
		case ProcessKind::Hermite: return std::pow(2.0 * *spec.n, 0.25) * sf::hermite_phi(*spec.n - 1, x);
		case ProcessKind::Sine: return std::sqrt(spec.sine_scale) * std::cos(x);
		case ProcessKind::Bessel: return x * sf::phi_bessel(*spec.alpha + 1, x);
		default: break;
	}
	throw std::invalid_argument("no second boundary function for " + to_string(spec.kind));
}

double BoundaryFunctions::psi_prime(double x) const {
	switch (spec.kind) {
		case ProcessKind::Hermite: return std::pow(2.0 * *spec.n, 0.25) * sf::hermite_phi_prime(*spec.n - 1, x);
		case ProcessKind::Sine: return -std::sqrt(spec.sine_scale) * std::sin(x);
		case ProcessKind::Bessel: {
			double a = *spec.alpha, beta = a + 0.5;
			return x * sf::phi_bessel(a, x) + (1 - beta) * sf::phi_bessel(a + 1, x);
		}
		default: break;
	}
	throw std::invalid_argument("no second boundary function for " + to_string(spec.kind));
}

BoundaryFunctions boundary_functions(const KernelSpec& spec) {
	if (spec.kind == ProcessKind::Laguerre) throw std::invalid_argument("boundary functions are not defined for laguerre");
	BoundaryFunctions b;
	b.spec = spec;
	b.has_psi = spec.kind != ProcessKind::Airy;
	return b;
}

}  // namespace dyson
