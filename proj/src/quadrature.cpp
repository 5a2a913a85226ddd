#include "dyson/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dyson {

const GaussRule& gauss_legendre(int n) {
	if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
	static std::mutex mu;
	static std::map<int, std::unique_ptr<GaussRule>> cache;
	std::lock_guard<std::mutex> lock(mu);
	auto& slot = cache[n];
	if (!slot) {
		gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
		if (!t) throw std::runtime_error("gauss_legendre: table allocation failed");
		std::vector<std::pair<double, double>> pts(n);
		for (int i = 0; i < n; ++i)
			gsl_integration_glfixed_point(-1.0, 1.0, i, &pts[i].first, &pts[i].second, t);
		gsl_integration_glfixed_table_free(t);
		std::sort(pts.begin(), pts.end());
		auto r = std::make_unique<GaussRule>();
		for (auto& [x, w] : pts) {
			r->x.push_back(x);
			r->w.push_back(w);
		}
		slot = std::move(r);
	}
	return *slot;
}

void append_panels(double a, double b, int panels, int n, std::vector<double>& z, std::vector<double>& w) {
	const GaussRule& g = gauss_legendre(n);
	double h = (b - a) / panels;
	for (int p = 0; p < panels; ++p) {
		double lo = a + p * h, half = 0.5 * h, mid = lo + half;
		for (int i = 0; i < n; ++i) {
			z.push_back(mid + half * g.x[i]);
			w.push_back(half * g.w[i]);
		}
	}
}

}  // namespace dyson
