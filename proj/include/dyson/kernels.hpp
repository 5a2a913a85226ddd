#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace dyson {

enum class ProcessKind { Airy, Hermite, Sine, Bessel, Laguerre };

std::string to_string(ProcessKind k);
ProcessKind parse_process(const std::string& s);

struct KernelSpec {
	ProcessKind kind = ProcessKind::Airy;
	std::vector<double> times;
	std::optional<int> n;
	std::optional<double> alpha;
	// Hermite only: include the e^{-n(tau_i - tau_j)} factor (determinant unchanged).
	bool hermite_shift = true;
	// Sine only: L -> sine_scale * L with phi, psi -> sqrt(sine_scale) * (sin, cos). The default
	// is the unnormalized kernel; 1/pi gives the gap-probability normalization.
	double sine_scale = 1.0;
	// Evaluate L^t_ij(x, y) = L_ji(y, x); used for the dual construction.
	bool transposed = false;

	int m() const { return int(times.size()); }
	void validate() const;
	bool domain_positive() const { return kind == ProcessKind::Bessel || kind == ProcessKind::Laguerre; }
	std::string fingerprint() const;
};

enum class Deriv { None, X, Y, XX, XY, YY };

struct KernelEntryPlan {
	enum class Strategy { FiniteSum, ClosedFormMinusFiniteSum, TruncatedQuadrature } strategy;
	double truncation;
	int quadrature_order;
};

inline constexpr double kTailTol = 1e-13;

// i, j are 0-based time indices.
double eval_entry(const KernelSpec& spec, int i, int j, double x, double y, Deriv d = Deriv::None);
inline double eval_entry_dx(const KernelSpec& s, int i, int j, double x, double y) { return eval_entry(s, i, j, x, y, Deriv::X); }
inline double eval_entry_dy(const KernelSpec& s, int i, int j, double x, double y) { return eval_entry(s, i, j, x, y, Deriv::Y); }
inline double eval_entry_dxx(const KernelSpec& s, int i, int j, double x, double y) { return eval_entry(s, i, j, x, y, Deriv::XX); }
inline double eval_entry_dxy(const KernelSpec& s, int i, int j, double x, double y) { return eval_entry(s, i, j, x, y, Deriv::XY); }
inline double eval_entry_dyy(const KernelSpec& s, int i, int j, double x, double y) { return eval_entry(s, i, j, x, y, Deriv::YY); }

Eigen::MatrixXd eval_block(const KernelSpec& spec, int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                           Deriv d = Deriv::None);

KernelEntryPlan entry_plan(const KernelSpec& spec, int i, int j, double x, double y);

// Bessel kernels with Phi_a(xz)Phi_a(yz) +/- Phi_{a+1}(xz)Phi_{a+1}(yz) in the integrand.
double bessel_pm_entry(const KernelSpec& spec, int i, int j, double x, double y, int sign, Deriv d = Deriv::None);

// Airy i<j entry by direct quadrature over (-inf, 0]; reference route for tests.
double airy_lower_direct(const KernelSpec& spec, int i, int j, double x, double y, Deriv d = Deriv::None);

// The kind's boundary functions: phi, and psi (Hermite, sine) or M psi (Bessel).
struct BoundaryFunctions {
	bool has_psi = false;
	double phi(double x) const;
	double phi_prime(double x) const;
	double psi(double x) const;
	double psi_prime(double x) const;
	KernelSpec spec;
};
BoundaryFunctions boundary_functions(const KernelSpec& spec);

}  // namespace dyson
