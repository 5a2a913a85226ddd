#include "dyson/mc_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dyson {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

// Fills M with the equilibrium law times `scale`.
void gaussian_fill(ProcessKind kind, Eigen::MatrixXcd& M, double scale, CounterRng& rng) {
	std::normal_distribution<double> g(0.0, 1.0);
	if (kind == ProcessKind::Hermite) {
		int n = int(M.rows());
		double sd_diag = scale * std::sqrt(0.5), sd_off = scale * 0.5;
		for (int i = 0; i < n; ++i) {
			M(i, i) = sd_diag * g(rng);
			for (int j = i + 1; j < n; ++j) {
				double re = sd_off * g(rng), im = sd_off * g(rng);
				M(i, j) = {re, im};
				M(j, i) = {re, -im};
			}
		}
	} else {
		double sd = scale * std::sqrt(0.5);
		for (int j = 0; j < M.cols(); ++j)
			for (int i = 0; i < M.rows(); ++i) {
				double re = sd * g(rng), im = sd * g(rng);
				M(i, j) = {re, im};
			}
	}
}

void check_kind(ProcessKind kind) {
	if (kind != ProcessKind::Hermite && kind != ProcessKind::Laguerre)
		throw std::invalid_argument("mc: only the hermite and laguerre processes can be simulated");
}

bool hits(const std::vector<double>& ev, const std::vector<Interval>& X) {
	for (const Interval& iv : X)
		for (double l : ev)
			if (l > iv.a && l < iv.b) return true;
	return false;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix(splitmix(seed) ^ (stream * 0xd1342543de82ef95ULL))) {}

CounterRng::result_type CounterRng::operator()() { return splitmix(key_ + 0x9e3779b97f4a7c15ULL * counter_++); }

OUState equilibrium_state(ProcessKind kind, int n, int p, CounterRng& rng) {
	check_kind(kind);
	if (n < 1) throw std::invalid_argument("mc: n must be >= 1");
	OUState s;
	s.kind = kind;
	if (kind == ProcessKind::Hermite) {
		s.M.resize(n, n);
	} else {
		if (p < n) throw std::invalid_argument("mc: laguerre needs p >= n");
		s.M.resize(p, n);
	}
	gaussian_fill(kind, s.M, 1.0, rng);
	return s;
}

OUState evolve_ou(const OUState& s, double delta_tau, CounterRng& rng) {
	if (!(delta_tau > 0)) throw std::invalid_argument("evolve_ou: delta_tau must be positive");
	double q = std::exp(-delta_tau);
	OUState out;
	out.kind = s.kind;
	out.M.resize(s.M.rows(), s.M.cols());
	gaussian_fill(s.kind, out.M, std::sqrt(-std::expm1(-2 * delta_tau)), rng);
	out.M += q * s.M;
	return out;
}

std::vector<double> spectrum(const OUState& s) {
	Eigen::VectorXd ev;
	if (s.kind == ProcessKind::Hermite)
		ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(s.M, Eigen::EigenvaluesOnly).eigenvalues();
	else
		ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(s.M.adjoint() * s.M, Eigen::EigenvaluesOnly).eigenvalues();
	std::vector<double> v(ev.data(), ev.data() + ev.size());
	std::sort(v.begin(), v.end());
	return v;
}

std::vector<double> sample_equilibrium_gue(int n, CounterRng& rng) { return spectrum(equilibrium_state(ProcessKind::Hermite, n, n, rng)); }

std::vector<double> sample_equilibrium_laguerre(int p, int n, CounterRng& rng) {
	return spectrum(equilibrium_state(ProcessKind::Laguerre, n, p, rng));
}

KernelSpec mc_kernel(const MCConfig& c) {
	check_kind(c.kind);
	KernelSpec s;
	s.kind = c.kind;
	s.times = c.tau;
	s.n = c.n;
	if (c.kind == ProcessKind::Laguerre) {
		if (c.p < c.n) throw std::invalid_argument("mc: laguerre needs p >= n");
		s.alpha = double(c.p - c.n);
	}
	s.validate();
	return s;
}

MCEstimate estimate_joint_prob(const MCConfig& c) {
	KernelSpec spec = mc_kernel(c);
	if (c.region.m() != spec.m()) throw std::invalid_argument("mc: region must list one set per time");
	c.region.validate(spec);
	if (c.trials < 10000) throw std::invalid_argument("mc: trials must be >= 10000");

	std::int64_t survived = 0;
	if (c.region.empty()) {
		survived = c.trials;
	} else {
		int m = spec.m();
#pragma omp parallel for reduction(+ : survived) schedule(static)
		for (std::int64_t t = 0; t < c.trials; ++t) {
			CounterRng rng(c.seed, std::uint64_t(t));
			OUState s = equilibrium_state(c.kind, c.n, c.p, rng);
			bool ok = !hits(spectrum(s), c.region.sets[0]);
			for (int k = 1; ok && k < m; ++k) {
				s = evolve_ou(s, c.tau[k] - c.tau[k - 1], rng);
				ok = !hits(spectrum(s), c.region.sets[k]);
			}
			survived += ok;
		}
	}
	MCEstimate e;
	e.trials = c.trials;
	e.seed = c.seed;
	e.p_hat = double(survived) / double(c.trials);
	e.std_err = std::sqrt(e.p_hat * (1 - e.p_hat) / double(c.trials));
	return e;
}

}  // namespace dyson
