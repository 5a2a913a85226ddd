#pragma once

#include "dyson/fredholm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace dyson {

// Counter-based generator: output k of stream (seed, stream) is a pure function of
// (seed, stream, k), so per-trial streams do not depend on scheduling.
class CounterRng {
public:
	using result_type = std::uint64_t;
	CounterRng(std::uint64_t seed, std::uint64_t stream);
	result_type operator()();
	static constexpr result_type min() { return 0; }
	static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

private:
	std::uint64_t key_, counter_ = 0;
};

// Hermite: n x n Hermitian H with density ~ exp(-Tr H^2).
// Laguerre: p x n complex A with density ~ exp(-Tr A*A).
struct OUState {
	ProcessKind kind = ProcessKind::Hermite;
	Eigen::MatrixXcd M;
};

OUState equilibrium_state(ProcessKind kind, int n, int p, CounterRng& rng);
// M <- q M + G with q = e^{-delta_tau} and G the equilibrium law scaled by sqrt(1 - q^2).
OUState evolve_ou(const OUState& s, double delta_tau, CounterRng& rng);
// Sorted eigenvalues of H, or of A*A.
std::vector<double> spectrum(const OUState& s);

std::vector<double> sample_equilibrium_gue(int n, CounterRng& rng);
std::vector<double> sample_equilibrium_laguerre(int p, int n, CounterRng& rng);

struct MCConfig {
	ProcessKind kind = ProcessKind::Hermite;
	int n = 1;
	int p = 1;  // Laguerre only; alpha = p - n
	std::vector<double> tau;
	Region region;
	std::int64_t trials = 100000;
	std::uint64_t seed = 1;
};

struct MCEstimate {
	double p_hat = 0;
	double std_err = 0;
	std::int64_t trials = 0;
	std::uint64_t seed = 0;
};

// The kernel whose Fredholm determinant the estimate targets.
KernelSpec mc_kernel(const MCConfig& c);

MCEstimate estimate_joint_prob(const MCConfig& c);

// Ratio det M(f)/det M(0) of the n x n moment matrix built from the Mehler transition
// factors, with f_k = -chi_{X_k}; n <= 2, m <= 2, Hermite only.
double eynard_mehta_direct(int n, const std::vector<double>& tau, const Region& region);

}  // namespace dyson
