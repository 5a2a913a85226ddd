#include "commands.hpp"

#include "dyson/dyson_ode.hpp"
#include "dyson/identities.hpp"
#include "dyson/mc_oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dyson::cli {

namespace {

// Flat JSON object with fields in insertion order and doubles at 17 digits.
class JsonLine {
public:
	JsonLine& str(const std::string& k, const std::string& v) { return raw(k, nlohmann::json(v).dump()); }
	JsonLine& num(const std::string& k, double v) { return raw(k, std::isfinite(v) ? fmt17(v) : "null"); }
	JsonLine& integer(const std::string& k, long long v) { return raw(k, std::to_string(v)); }
	JsonLine& uinteger(const std::string& k, unsigned long long v) { return raw(k, std::to_string(v)); }
	JsonLine& boolean(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
	JsonLine& nums(const std::string& k, const std::vector<double>& v) {
		std::string s = "[";
		for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
		return raw(k, s + "]");
	}
	JsonLine& raw(const std::string& k, const std::string& v) {
		body_ += (body_.empty() ? "" : ",") + nlohmann::json(k).dump() + ":" + v;
		return *this;
	}
	std::string dump() const { return "{" + body_ + "}"; }

private:
	std::string body_;
};

// Writes to the configured file, or to out when the path is empty.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
	if (path.empty()) {
		out << text;
		return;
	}
	std::ofstream f(path);
	if (!f) throw std::invalid_argument("cannot open output file " + path);
	f << text;
}

void check_format(const std::string& f) {
	if (f != "json" && f != "csv") throw std::invalid_argument("format must be json or csv, got " + f);
}

template <class F>
int guarded(std::ostream& err, F&& f) {
	try {
		return f();
	} catch (const NearSingularError& e) {
		err << "error: " << e.what() << "\n";
		return kNearSingular;
	} catch (const std::invalid_argument& e) {
		err << "error: " << e.what() << "\n";
		return kInvalid;
	} catch (const std::out_of_range& e) {
		err << "error: " << e.what() << "\n";
		return kInvalid;
	} catch (const std::domain_error& e) {
		err << "error: " << e.what() << "\n";
		return kInvalid;
	}
}

}  // namespace

std::string fmt17(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

KernelSpec RunConfig::kernel_spec() const {
	KernelSpec s;
	s.kind = parse_process(process);
	s.times = times;
	s.n = n;
	s.alpha = alpha;
	if (s.kind == ProcessKind::Sine) s.sine_scale = sine_scale;
	s.validate();
	return s;
}

Region RunConfig::validated_region() const {
	KernelSpec s = kernel_spec();
	Region r = parse_region(region, s.m());
	r.validate(s);
	if (order < 4) throw std::invalid_argument("order must be at least 4");
	return r;
}

std::vector<double> TwConfig::points() const {
	if (!grid.empty()) return grid;
	if (!(step > 0)) throw std::invalid_argument("tw: step must be positive");
	if (!(to >= from)) throw std::invalid_argument("tw: need from <= to");
	std::vector<double> s;
	long count = std::lround(std::floor((to - from) / step + 1e-9));
	for (long k = 0; k <= count; ++k) s.push_back(from + k * step);
	return s;
}

int cmd_prob(const RunConfig& c, std::ostream& out, std::ostream& err) {
	return guarded(err, [&] {
		check_format(c.format);
		KernelSpec spec = c.kernel_spec();
		Region region = c.validated_region();
		DetResult d = logdet(discretize(spec, region, c.order));
		std::string text;
		if (c.format == "json") {
			text = JsonLine()
			           .str("process", to_string(spec.kind))
			           .nums("times", spec.times)
			           .str("region", region.to_string())
			           .num("prob", d.prob)
			           .num("logdet", d.logdet)
			           .num("refinement_error_estimate", d.refinement_error_estimate)
			           .integer("order_used", d.order_used)
			           .str("config", spec.fingerprint())
			           .dump() +
			       "\n";
		} else {
			text = "prob,logdet,refinement_error_estimate,order_used\n" + fmt17(d.prob) + "," + fmt17(d.logdet) + "," +
			       fmt17(d.refinement_error_estimate) + "," + std::to_string(d.order_used) + "\n";
		}
		emit(c.output, out, text);
		return int(kOk);
	});
}

int cmd_tw(const TwConfig& c, std::ostream& out, std::ostream& err) {
	return guarded(err, [&] {
		check_format(c.format);
		std::vector<TwRow> rows = tw_table(c.points(), c.s_start);
		std::ostringstream s;
		if (c.format == "csv") {
			s << "s,F2_fredholm,F2_ode,abs_diff\n";
			for (const auto& r : rows)
				s << fmt17(r.s) << "," << fmt17(r.f_fredholm) << "," << fmt17(r.f_ode) << "," << fmt17(std::fabs(r.f_fredholm - r.f_ode))
				  << "\n";
		} else {
			for (const auto& r : rows)
				s << JsonLine()
				         .num("s", r.s)
				         .num("F2_fredholm", r.f_fredholm)
				         .num("F2_ode", r.f_ode)
				         .num("abs_diff", std::fabs(r.f_fredholm - r.f_ode))
				         .dump()
				  << "\n";
		}
		emit(c.output, out, s.str());
		return int(kOk);
	});
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
	return guarded(err, [&] {
		std::vector<ResidualReport> reports = run_suite(suite);
		int status = kOk;
		for (const auto& r : reports) {
			JsonLine j;
			j.str("identity_id", r.identity_id)
			    .num("max_abs_residual", r.max_abs_residual)
			    .num("tolerance", r.tolerance)
			    .boolean("pass", r.pass)
			    .str("config", r.config);
			if (r.inconclusive) j.boolean("inconclusive", true).num("condition", r.condition);
			out << j.dump() << "\n";
			if (!r.pass && !r.inconclusive) {
				err << "FAILED " << r.identity_id << " " << r.config << " residual " << fmt17(r.max_abs_residual) << "\n";
				status = kFailed;
			}
		}
		out.flush();
		return status;
	});
}

int cmd_mc(const RunConfig& c, std::ostream& out, std::ostream& err) {
	return guarded(err, [&] {
		check_format(c.format);
		MCConfig mc;
		mc.kind = parse_process(c.process);
		if (!c.n) throw std::invalid_argument("mc: --n is required");
		mc.n = *c.n;
		mc.p = mc.kind == ProcessKind::Laguerre && c.p == 0 ? mc.n : c.p;
		mc.tau = c.times;
		mc.trials = c.trials;
		mc.seed = c.seed;
		if (c.trials <= 0) throw std::invalid_argument("mc: trials must be positive");
		KernelSpec spec = mc_kernel(mc);  // validates kind, n, p, times
		mc.region = parse_region(c.region, spec.m());
		mc.region.validate(spec);
		MCEstimate e = estimate_joint_prob(mc);
		double det = logdet(discretize(spec, mc.region, c.order), false).prob;
		double z = e.std_err > 0 ? (e.p_hat - det) / e.std_err : (e.p_hat == det ? 0.0 : INFINITY);
		double em = NAN;
		if (mc.kind == ProcessKind::Hermite && mc.n <= 2 && spec.m() <= 2) em = eynard_mehta_direct(mc.n, mc.tau, mc.region);
		std::string config = spec.fingerprint() + "|" + mc.region.to_string() + "|trials=" + std::to_string(e.trials) +
		                     "|seed=" + std::to_string(e.seed);
		std::string text;
		if (c.format == "json") {
			text = JsonLine()
			           .num("p_hat", e.p_hat)
			           .num("std_err", e.std_err)
			           .num("determinant", det)
			           .num("z_score", z)
			           .num("eynard_mehta", em)
			           .integer("trials", e.trials)
			           .uinteger("seed", e.seed)
			           .str("config", config)
			           .dump() +
			       "\n";
		} else {
			text = "p_hat,std_err,determinant,z_score,eynard_mehta,trials,seed\n" + fmt17(e.p_hat) + "," + fmt17(e.std_err) + "," +
			       fmt17(det) + "," + fmt17(z) + "," + (std::isfinite(em) ? fmt17(em) : "") + "," + std::to_string(e.trials) + "," +
			       std::to_string(e.seed) + "\n";
		}
		emit(c.output, out, text);
		return int(kOk);
	});
}

namespace {

void kernel_options(CLI::App* sub, RunConfig& c) {
	sub->add_option("--process", c.process, "airy, hermite, sine, bessel or laguerre")->capture_default_str();
	sub->add_option("--times", c.times, "Comma-separated, strictly increasing")->delimiter(',')->capture_default_str();
	sub->add_option("--n", c.n, "Matrix size (hermite, laguerre)");
	sub->add_option("--alpha", c.alpha, "Bessel/Laguerre parameter");
	sub->add_option("--region", c.region, "e.g. \"1:(2,inf);2:(-inf,0)+(1,3)\"; empty means no constraint");
	sub->add_option("--order", c.order, "Gauss-Legendre nodes per panel")->capture_default_str();
	sub->add_option("--format", c.format, "json or csv")->capture_default_str();
	sub->add_option("--output", c.output, "Write here instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
	CLI::App app{"Joint exclusion probabilities and identity checks for Dyson processes"};
	app.require_subcommand(1);
	app.fallthrough();
	app.allow_config_extras(CLI::config_extras_mode::error);
	// Keys are the long flag names, grouped under [prob], [tw] or [mc].
	app.set_config("--config", "", "INI file with the same keys as the flags");
	int threads = 0;
	app.add_option("--threads", threads, "OpenMP thread count (0: runtime default)")->envname("DYSON_THREADS");

	RunConfig prob;
	auto* p = app.add_subcommand("prob", "Fredholm determinant of an extended kernel over a region");
	kernel_options(p, prob);
	p->add_option("--sine-scale", prob.sine_scale, "Sine kernel normalization")->capture_default_str();

	TwConfig tw;
	auto* t = app.add_subcommand("tw", "F2 by the determinant and by Painleve II");
	t->add_option("--from", tw.from)->capture_default_str();
	t->add_option("--to", tw.to)->capture_default_str();
	t->add_option("--step", tw.step)->capture_default_str();
	t->add_option("--grid", tw.grid, "Explicit comma-separated points")->delimiter(',');
	t->add_option("--s-start", tw.s_start, "Where the ODE is anchored")->capture_default_str();
	t->add_option("--format", tw.format, "csv or json")->capture_default_str();
	t->add_option("--output", tw.output);

	std::string suite;
	auto* v = app.add_subcommand("verify", "Run an identity residual suite");
	v->add_option("suite", suite, "all, airy, hermite, sine or bessel")->required();

	RunConfig mc;
	mc.process = "hermite";
	auto* m = app.add_subcommand("mc", "Monte Carlo estimate next to the determinant");
	kernel_options(m, mc);
	m->add_option("--p", mc.p, "Laguerre rows (default n)");
	m->add_option("--trials", mc.trials)->capture_default_str();
	m->add_option("--seed", mc.seed)->capture_default_str();

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::ParseError& e) {
		app.exit(e, out, err);
		return kInvalid;
	}

	if (threads < 0) {
		err << "error: --threads must be non-negative\n";
		return kInvalid;
	}
#ifdef _OPENMP
	if (threads > 0) omp_set_num_threads(threads);
#endif

	if (*p) return cmd_prob(prob, out, err);
	if (*t) return cmd_tw(tw, out, err);
	if (*v) return cmd_verify(suite, out, err);
	return cmd_mc(mc, out, err);
}

}  // namespace dyson::cli
