#ifndef NETSENSE_CLI_HPP
#define NETSENSE_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace netsense::cli {

constexpr std::uint64_t kDefaultSeed = 20221101;
constexpr const char* kSeedEnv = "NETSENSE_SEED";

/// A complete invocation: replaying it through parse_and_dispatch reproduces the run.
struct RunConfig
{
	std::string subcommand;
	std::string scene;
	std::uint64_t seed = kDefaultSeed;
	std::string out_dir = ".";
	/// Remaining subcommand flags, e.g. {"--tol", "1e-6"}; flags without a value map to "".
	std::map<std::string, std::string> overrides;

	friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Throws IoError on unknown or mistyped keys.
RunConfig run_config_from_json(const nlohmann::json& j);
/// Argument vector (without program name) equivalent to the config.
std::vector<std::string> to_args(const RunConfig& cfg);

/// Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}

#endif
