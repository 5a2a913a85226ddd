#include "dyson/fredholm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dyson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
	size_t a = s.find_first_not_of(" \t\n\r"), b = s.find_last_not_of(" \t\n\r");
	return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_bound(const std::string& raw) {
	std::string t = trim(raw);
	if (t == "inf" || t == "+inf") return kInf;
	if (t == "-inf") return -kInf;
	size_t pos = 0;
	double v;
	try {
		v = std::stod(t, &pos);
	} catch (const std::exception&) {
		throw std::invalid_argument("region: bad number '" + t + "'");
	}
	if (pos != t.size() || !std::isfinite(v)) throw std::invalid_argument("region: bad number '" + t + "'");
	return v;
}

std::string fmt(double v) {
	if (v == kInf) return "inf";
	if (v == -kInf) return "-inf";
	std::ostringstream os;
	os.precision(17);
	os << v;
	return os.str();
}

}  // namespace

Region Region::right_tails(const std::vector<double>& xi) {
	Region r = empty_for(int(xi.size()));
	for (size_t k = 0; k < xi.size(); ++k) r.sets[k].push_back({xi[k], kInf});
	return r;
}

bool Region::empty() const {
	for (const auto& s : sets)
		if (!s.empty()) return false;
	return true;
}

std::vector<Endpoint> Region::endpoints() const {
	std::vector<Endpoint> out;
	for (int k = 0; k < m(); ++k) {
		int w = 0;
		for (const auto& iv : sets[k])
			for (double v : {iv.a, iv.b}) {
				++w;
				if (std::isfinite(v)) out.push_back({k, w, v, (w % 2) ? 1 : -1});
			}
	}
	return out;
}

void Region::validate(const KernelSpec& spec) const {
	if (m() != spec.m())
		throw std::invalid_argument("region: has " + std::to_string(m()) + " time slots but the kernel has m = " + std::to_string(spec.m()));
	bool up_ok = spec.kind == ProcessKind::Airy || spec.kind == ProcessKind::Hermite || spec.kind == ProcessKind::Laguerre;
	bool down_ok = spec.kind == ProcessKind::Hermite;
	for (int k = 0; k < m(); ++k) {
		const auto& s = sets[k];
		std::string at = "region: X_" + std::to_string(k + 1) + ": ";
		for (size_t u = 0; u < s.size(); ++u) {
			double a = s[u].a, b = s[u].b;
			if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument(at + "NaN endpoint");
			if (!(a < b)) throw std::invalid_argument(at + "interval endpoints must satisfy a < b");
			if (u > 0 && !(s[u - 1].b < a)) throw std::invalid_argument(at + "intervals must be ordered and disjoint");
			if (a == kInf || b == -kInf) throw std::invalid_argument(at + "misplaced infinity");
			if (b == kInf && (!up_ok || u + 1 != s.size()))
				throw std::invalid_argument(at + "+inf endpoint not allowed for " + dyson::to_string(spec.kind));
			if (a == -kInf && (!down_ok || u != 0))
				throw std::invalid_argument(at + "-inf endpoint not allowed for " + dyson::to_string(spec.kind));
			if (spec.domain_positive() && !(a > 0))
				throw std::invalid_argument(at + "endpoints must be positive for " + dyson::to_string(spec.kind));
		}
	}
}

Region Region::shifted(double h) const {
	Region r = *this;
	for (auto& s : r.sets)
		for (auto& iv : s) {
			iv.a += h;
			iv.b += h;
		}
	return r;
}

Region Region::moved(int e, double h) const {
	Region r = *this;
	int seen = 0;
	for (auto& s : r.sets)
		for (auto& iv : s)
			for (double* v : {&iv.a, &iv.b})
				if (std::isfinite(*v) && seen++ == e) {
					*v += h;
					return r;
				}
	throw std::out_of_range("region: endpoint index out of range");
}

std::string Region::to_string() const {
	std::string out;
	for (int k = 0; k < m(); ++k) {
		if (sets[k].empty()) continue;
		if (!out.empty()) out += ";";
		out += std::to_string(k + 1) + ":";
		for (size_t u = 0; u < sets[k].size(); ++u)
			out += (u ? "+(" : "(") + fmt(sets[k][u].a) + "," + fmt(sets[k][u].b) + ")";
	}
	return out;
}

Region parse_region(const std::string& text, int m) {
	if (m < 1) throw std::invalid_argument("region: m must be positive");
	Region r = Region::empty_for(m);
	std::vector<bool> seen(m, false);
	std::stringstream ss(text);
	std::string part;
	while (std::getline(ss, part, ';')) {
		part = trim(part);
		if (part.empty()) continue;
		size_t colon = part.find(':');
		if (colon == std::string::npos) throw std::invalid_argument("region: expected 'k:(a,b)' in '" + part + "'");
		std::string ks = trim(part.substr(0, colon));
		int k;
		try {
			size_t pos = 0;
			k = std::stoi(ks, &pos);
			if (pos != ks.size()) throw std::invalid_argument(ks);
		} catch (const std::exception&) {
			throw std::invalid_argument("region: bad time index '" + ks + "'");
		}
		if (k < 1 || k > m) throw std::invalid_argument("region: time index " + ks + " outside 1.." + std::to_string(m));
		if (seen[k - 1]) throw std::invalid_argument("region: time index " + ks + " given twice");
		seen[k - 1] = true;
		std::string rest = trim(part.substr(colon + 1));
		std::stringstream is(rest);
		std::string iv;
		while (std::getline(is, iv, '+')) {
			iv = trim(iv);
			// "+inf" inside an interval would be split; rejoin it
			if (iv.empty()) throw std::invalid_argument("region: empty interval in '" + rest + "'");
			while (iv.back() != ')' && is.good()) {
				std::string more;
				std::getline(is, more, '+');
				iv += "+" + more;
				iv = trim(iv);
			}
			if (iv.size() < 5 || iv.front() != '(' || iv.back() != ')')
				throw std::invalid_argument("region: expected '(a,b)' but got '" + iv + "'");
			std::string body = iv.substr(1, iv.size() - 2);
			size_t comma = body.find(',');
			if (comma == std::string::npos) throw std::invalid_argument("region: expected '(a,b)' but got '" + iv + "'");
			r.sets[k - 1].push_back({parse_bound(body.substr(0, comma)), parse_bound(body.substr(comma + 1))});
		}
	}
	return r;
}

}  // namespace dyson
