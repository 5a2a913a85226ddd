#include "dyson/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyson::specfun {

namespace {

using ld = long double;
constexpr double kPi = std::numbers::pi;
constexpr ld kPiL = std::numbers::pi_v<long double>;

void require_finite(double x, const char* what) {
	if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

// Asymptotic Airy expansions, used for x > kAiryHi and x < kAiryLo and to seed the anchor table.
constexpr double kAiryLo = -10.0;
constexpr double kAiryHi = 12.0;
constexpr double kAnchorStep = 0.25;

void airy_asym_pos(ld x, ld& ai, ld& aip) {
	ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
	ld iz = 1.0L / zeta;
	ld su = 1.0L, sv = 1.0L, u = 1.0L, p = 1.0L, last = 1.0L;
	for (int k = 1; k < 80; ++k) {
		u *= ld(6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (ld(2 * k - 1) * 216.0L * k);
		ld v = -ld(6 * k + 1) / ld(6 * k - 1) * u;
		p *= -iz;
		ld t = u * p;
		if (std::fabs(t) > last) break;
		last = std::fabs(t);
		su += t;
		sv += v * p;
		if (last < 1e-21L) break;
	}
	ld e = std::exp(-zeta) / (2.0L * std::sqrt(kPiL));
	ld x4 = std::sqrt(std::sqrt(x));
	ai = e / x4 * su;
	aip = -e * x4 * sv;
}

void airy_asym_neg(ld z, ld& ai, ld& aip) {
	ld zeta = 2.0L / 3.0L * z * std::sqrt(z);
	ld iz = 1.0L / zeta;
	ld pu = 0, qu = 0, pv = 0, qv = 0, u = 1.0L, p = 1.0L, last = 2.0L;
	for (int k = 0; k < 80; ++k) {
		if (k > 0) {
			u *= ld(6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (ld(2 * k - 1) * 216.0L * k);
			p *= iz;
		}
		ld v = k == 0 ? 1.0L : -ld(6 * k + 1) / ld(6 * k - 1) * u;
		ld t = u * p;
		if (std::fabs(t) > last) break;
		last = std::fabs(t);
		// sign pattern (-1)^{floor(k/2)}
		ld sg = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
		if (k % 2 == 0) {
			pu += sg * t;
			pv += sg * v * p;
		} else {
			qu += sg * t;
			qv += sg * v * p;
		}
		if (last < 1e-21L) break;
	}
	ld th = zeta + kPiL / 4.0L;
	ld s = std::sin(th), c = std::cos(th);
	ld z4 = std::sqrt(std::sqrt(z));
	ld rp = 1.0L / std::sqrt(kPiL);
	ai = rp / z4 * (s * pu - c * qu);
	aip = -rp * z4 * (c * pv + s * qv);
}

// One Taylor step of y'' = x y from a by h.
template <class T>
void airy_taylor(T a, T y0, T y1, T h, T& y, T& yp, T tol) {
	T cm1 = 0, c0 = y0, c1 = y1;
	y = c0 + c1 * h;
	yp = c1;
	T hp = h;  // h^{n+1}
	bool prev_small = false;
	for (int n = 0; n < 120; ++n) {
		T c2 = (a * c0 + cm1) / T((n + 2) * (n + 1));
		T ty = c2 * hp * h, tp = T(n + 2) * c2 * hp;
		y += ty;
		yp += tp;
		hp *= h;
		cm1 = c0;
		c0 = c1;
		c1 = c2;
		bool small = std::fabs(ty) + std::fabs(tp) <= tol * (std::fabs(y) + std::fabs(yp));
		if (small && prev_small) break;
		prev_small = small;
	}
}

struct AiryAnchors {
	std::vector<double> ai, aip;
	AiryAnchors() {
		int n = int(std::lround((kAiryHi - kAiryLo) / kAnchorStep)) + 1;
		ai.resize(n);
		aip.resize(n);
		ld y, yp;
		airy_asym_pos(ld(kAiryHi), y, yp);
		ai[n - 1] = double(y);
		aip[n - 1] = double(yp);
		// Backward stepping is stable: Ai is the dominant solution as x decreases.
		for (int i = n - 1; i > 0; --i) {
			ld a = ld(kAiryLo) + ld(i) * ld(kAnchorStep);
			ld ny, nyp;
			airy_taylor<ld>(a, y, yp, -ld(kAnchorStep), ny, nyp, 1e-24L);
			y = ny;
			yp = nyp;
			ai[i - 1] = double(y);
			aip[i - 1] = double(yp);
		}
	}
};

const AiryAnchors& anchors() {
	static const AiryAnchors a;
	return a;
}

ld bessel_series_sum(double alpha, double x, bool modified) {
	ld t = 1.0L, s = 1.0L;
	ld w = ld(x) * ld(x) / 4.0L;
	if (!modified) w = -w;
	for (int k = 1; k < 500; ++k) {
		t *= w / (ld(k) * (ld(alpha) + k));
		s += t;
		if (std::fabs(t) < 1e-21L * std::fabs(s)) break;
	}
	return s;
}

// Hankel expansion: returns P and Q with J = sqrt(2/(pi x)) (P cos chi - Q sin chi).
bool hankel_pq(double alpha, double x, double& P, double& Q) {
	ld mu = 4.0L * alpha * alpha;
	ld a = 1.0L, p = 0, q = 0, last = std::numeric_limits<ld>::max();
	p = 1.0L;
	bool converged = false;
	for (int k = 1; k < 200; ++k) {
		a *= (mu - ld(2 * k - 1) * (2 * k - 1)) / (ld(k) * 8.0L * x);
		ld at = std::fabs(a);
		if (at > last && k > 2) break;
		last = at;
		ld sg = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
		if (k % 2 == 0)
			p += sg * a;
		else
			q += sg * a;
		if (at < 1e-18L) {
			converged = true;
			break;
		}
		if (a == 0) {
			converged = true;
			break;
		}
	}
	P = double(p);
	Q = double(q);
	return converged;
}

constexpr double kBesselCross = 16.0;

void check_alpha(double alpha) {
	if (!std::isfinite(alpha)) throw std::domain_error("bessel: non-finite order");
	if (alpha < -0.5) throw std::invalid_argument("bessel: order below -1/2 is unsupported");
}

void check_k(int k, int kmax) {
	if (k < 0) throw std::domain_error("negative index");
	if (k > kmax) throw std::out_of_range("index " + std::to_string(k) + " exceeds k_max " + std::to_string(kmax));
}

}  // namespace

void airy(double x, double& ai, double& aip) {
	require_finite(x, "airy");
	if (x > kAiryHi) {
		ld a, b;
		airy_asym_pos(x, a, b);
		ai = double(a);
		aip = double(b);
		return;
	}
	if (x < kAiryLo) {
		ld a, b;
		airy_asym_neg(-ld(x), a, b);
		ai = double(a);
		aip = double(b);
		return;
	}
	const AiryAnchors& t = anchors();
	int i = int(std::lround((x - kAiryLo) / kAnchorStep));
	double a = kAiryLo + i * kAnchorStep;
	airy_taylor<double>(a, t.ai[i], t.aip[i], x - a, ai, aip, 1e-17);
}

double airy_ai(double x) {
	double a, b;
	airy(x, a, b);
	return a;
}

double airy_ai_prime(double x) {
	double a, b;
	airy(x, a, b);
	return b;
}

double bessel_j(double alpha, double x) {
	check_alpha(alpha);
	require_finite(x, "bessel_j");
	if (x < 0) throw std::domain_error("bessel_j: negative argument");
	if (x == 0) {
		if (alpha == 0) return 1.0;
		return alpha > 0 ? 0.0 : std::numeric_limits<double>::infinity();
	}
	if (x > kBesselCross) {
		double P, Q;
		if (hankel_pq(alpha, x, P, Q)) {
			double chi = x - (alpha / 2 + 0.25) * kPi;
			return std::sqrt(2.0 / (kPi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
		}
	}
	ld lp = ld(alpha) * std::log(ld(x) / 2) - std::lgamma(ld(alpha) + 1);
	return double(std::exp(lp) * bessel_series_sum(alpha, x, false));
}

double bessel_i_scaled(double alpha, double x) {
	if (!std::isfinite(alpha) || alpha <= -1) throw std::domain_error("bessel_i_scaled: order must exceed -1");
	require_finite(x, "bessel_i_scaled");
	if (x < 0) throw std::domain_error("bessel_i_scaled: negative argument");
	if (x == 0) {
		if (alpha == 0) return 1.0;
		return alpha > 0 ? 0.0 : std::numeric_limits<double>::infinity();
	}
	if (x > 60.0) {
		ld mu = 4.0L * alpha * alpha, a = 1.0L, s = 1.0L, last = 1.0L;
		for (int k = 1; k < 200; ++k) {
			a *= -(mu - ld(2 * k - 1) * (2 * k - 1)) / (ld(k) * 8.0L * x);
			if (std::fabs(a) > last) break;
			last = std::fabs(a);
			s += a;
			if (last < 1e-20L) break;
		}
		return double(s / std::sqrt(2.0L * kPiL * x));
	}
	ld lp = ld(alpha) * std::log(ld(x) / 2) - std::lgamma(ld(alpha) + 1) - ld(x);
	return double(std::exp(lp) * bessel_series_sum(alpha, x, true));
}

double phi_bessel(double alpha, double z) {
	check_alpha(alpha);
	require_finite(z, "phi_bessel");
	if (z < 0) throw std::domain_error("phi_bessel: negative argument");
	if (z > kBesselCross) {
		double P, Q;
		if (hankel_pq(alpha, z, P, Q)) {
			double chi = z - (alpha / 2 + 0.25) * kPi;
			return std::sqrt(2.0 / kPi) * (P * std::cos(chi) - Q * std::sin(chi));
		}
	}
	ld beta = ld(alpha) + 0.5L;
	if (z == 0) return beta == 0 ? double(std::sqrt(2.0L / kPiL)) : 0.0;
	ld lp = beta * std::log(ld(z)) - ld(alpha) * std::log(2.0L) - std::lgamma(ld(alpha) + 1);
	return double(std::exp(lp) * bessel_series_sum(alpha, z, false));
}

double phi_bessel_prime(double alpha, double z) {
	check_alpha(alpha);
	double beta = alpha + 0.5;
	if (z == 0) {
		if (beta == 0 || beta > 1) return 0.0;
		if (beta == 1) return double(std::exp(-ld(alpha) * std::log(2.0L) - std::lgamma(ld(alpha) + 1)));
		return std::numeric_limits<double>::infinity();
	}
	return -phi_bessel(alpha + 1, z) + beta * phi_bessel(alpha, z) / z;
}

void hermite_phi_table(int kmax_needed, double x, double* out, int kmax) {
	require_finite(x, "hermite_phi");
	check_k(kmax_needed, kmax);
	// long double keeps e^{-x^2/2} representable far beyond the oscillatory zone.
	ld X = x;
	ld p0 = std::exp(-X * X / 2) / std::sqrt(std::sqrt(kPiL));
	out[0] = double(p0);
	if (kmax_needed == 0) return;
	ld p1 = std::sqrt(2.0L) * X * p0;
	out[1] = double(p1);
	for (int k = 1; k < kmax_needed; ++k) {
		ld p2 = (X * p1 - std::sqrt(ld(k) / 2) * p0) / std::sqrt(ld(k + 1) / 2);
		p0 = p1;
		p1 = p2;
		out[k + 1] = double(p2);
	}
}

double hermite_phi(int k, double x, int kmax) {
	check_k(k, kmax);
	std::vector<double> t(k + 1);
	hermite_phi_table(k, x, t.data(), kmax);
	return t[k];
}

double hermite_phi_prime(int k, double x, int kmax) {
	check_k(k, kmax);
	std::vector<double> t(k + 2);
	hermite_phi_table(k + 1, x, t.data(), kmax + 1);
	double lo = k > 0 ? std::sqrt(k / 2.0) * t[k - 1] : 0.0;
	return lo - std::sqrt((k + 1) / 2.0) * t[k + 1];
}

void laguerre_phi_table(double alpha, int kmax_needed, double x, double* out, int kmax) {
	if (!std::isfinite(alpha) || alpha <= -1) throw std::domain_error("laguerre_phi: alpha must exceed -1");
	require_finite(x, "laguerre_phi");
	if (x < 0) throw std::domain_error("laguerre_phi: negative argument");
	check_k(kmax_needed, kmax);
	ld a = alpha, X = x;
	ld p0;
	if (x == 0)
		p0 = alpha == 0 ? 1.0L : (alpha > 0 ? 0.0L : std::numeric_limits<ld>::infinity());
	else
		p0 = std::exp(a / 2 * std::log(X) - X / 2 - std::lgamma(a + 1) / 2);
	out[0] = double(p0);
	if (kmax_needed == 0) return;
	if (x == 0 && alpha != 0) {
		for (int k = 1; k <= kmax_needed; ++k) out[k] = out[0];
		return;
	}
	ld p1 = (a + 1 - X) * p0 / std::sqrt(a + 1);
	out[1] = double(p1);
	for (int k = 1; k < kmax_needed; ++k) {
		ld p2 = ((2 * k + a + 1 - X) * p1 - std::sqrt(ld(k) * (k + a)) * p0) / std::sqrt(ld(k + 1) * (k + a + 1));
		p0 = p1;
		p1 = p2;
		out[k + 1] = double(p2);
	}
}

double laguerre_phi(double alpha, int k, double x, int kmax) {
	check_k(k, kmax);
	std::vector<double> t(k + 1);
	laguerre_phi_table(alpha, k, x, t.data(), kmax);
	return t[k];
}

double laguerre_phi_prime(double alpha, int k, double x, int kmax) {
	check_k(k, kmax);
	if (x <= 0) throw std::domain_error("laguerre_phi_prime: argument must be positive");
	std::vector<double> t(k + 1);
	laguerre_phi_table(alpha, k, x, t.data(), kmax);
	double lo = k > 0 ? std::sqrt(k * (k + alpha)) * t[k - 1] : 0.0;
	return (alpha / (2 * x) - 0.5) * t[k] + (k * t[k] - lo) / x;
}

double mehler(double q, double lambda, double mu) {
	if (!(q > 0 && q < 1)) throw std::domain_error("mehler: q must lie in (0,1)");
	require_finite(lambda, "mehler");
	require_finite(mu, "mehler");
	double d = 1 - q * q;
	return std::exp(-q * q / d * lambda * lambda - mu * mu / d + 2 * q / d * lambda * mu) / std::sqrt(kPi * d);
}

Bilinear mehler_phi_sum(double q, double x, double y) {
	if (!(q > 0 && q < 1)) throw std::domain_error("mehler: q must lie in (0,1)");
	double d = 1 - q * q, s = 1 + q * q;
	double E = -(s * (x * x + y * y) - 4 * q * x * y) / (2 * d);
	double Ex = -(s * x - 2 * q * y) / d, Ey = -(s * y - 2 * q * x) / d;
	double Exx = -s / d, Exy = 2 * q / d;
	double v = std::exp(E) / std::sqrt(kPi * d);
	return {v, v * Ex, v * Ey, v * (Ex * Ex + Exx), v * (Ex * Ey + Exy), v * (Ey * Ey + Exx)};
}

double hille_hardy(double q, double alpha, double lambda, double mu) {
	if (!(q > 0 && q < 1)) throw std::domain_error("hille_hardy: q must lie in (0,1)");
	if (!std::isfinite(alpha) || alpha <= -1) throw std::domain_error("hille_hardy: alpha must exceed -1");
	if (!(lambda > 0) || !(mu > 0) || !std::isfinite(lambda) || !std::isfinite(mu))
		throw std::domain_error("hille_hardy: arguments must be positive");
	double d = 1 - q * q;
	double z = 2 * q * std::sqrt(lambda * mu) / d;
	double e = -(q * q * lambda + mu) / d + z + alpha / 2 * std::log(mu / lambda) - alpha * std::log(q);
	return std::exp(e) / d * bessel_i_scaled(alpha, z);
}

double hille_hardy_phi_sum(double q, double alpha, double x, double y) {
	if (!(q > 0 && q < 1)) throw std::domain_error("hille_hardy: q must lie in (0,1)");
	if (!std::isfinite(alpha) || alpha <= -1) throw std::domain_error("hille_hardy: alpha must exceed -1");
	if (x < 0 || y < 0) throw std::domain_error("hille_hardy: negative argument");
	double d = 1 - q * q;
	double z = 2 * q * std::sqrt(x * y) / d;
	if (z == 0 && alpha > 0) return 0.0;
	double e = -(1 + q * q) * (x + y) / (2 * d) + z - alpha * std::log(q);
	return std::exp(e) / d * bessel_i_scaled(alpha, z);
}

}  // namespace dyson::specfun
