#pragma once

#include "dyson/fredholm.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dyson::cli {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kNearSingular = 3 };

struct RunConfig {
	std::string process = "airy";
	std::vector<double> times{0.0};
	std::optional<int> n;
	std::optional<double> alpha;
	int p = 0;  // mc, Laguerre
	double sine_scale = 0.31830988618379067;  // 1/pi: gap-probability normalization
	std::string region;
	int order = kDefaultOrder;
	std::int64_t trials = 100000;
	std::uint64_t seed = 1;
	std::string format = "json";
	std::string output;

	KernelSpec kernel_spec() const;
	// Checks the KernelSpec and Region invariants; throws std::invalid_argument.
	Region validated_region() const;
};

struct TwConfig {
	double from = -6, to = 2, step = 0.25;
	std::vector<double> grid;  // overrides from/to/step when non-empty
	double s_start = 8;
	std::string format = "csv";
	std::string output;

	std::vector<double> points() const;
};

// Each returns an exit status; results go to out (or the configured output file), messages to err.
int cmd_prob(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_tw(const TwConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);
int cmd_mc(const RunConfig& c, std::ostream& out, std::ostream& err);

// Full command line, including argv[0].
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// printf("%.17g")
std::string fmt17(double v);

}  // namespace dyson::cli
