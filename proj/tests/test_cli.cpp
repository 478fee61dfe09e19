#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "netsense/cli.hpp"

using namespace netsense::cli;
namespace fs = std::filesystem;

namespace {

struct Run
{
	int code;
	std::string out;
	std::string err;
};

Run run(const std::vector<std::string>& args)
{
	std::ostringstream out, err;
	const int code = parse_and_dispatch(args, out, err);
	return {code, out.str(), err.str()};
}

std::string scene(const std::string& name) { return std::string(NETSENSE_DATA_DIR) + "/scenes/" + name; }

fs::path scratch()
{
	const auto dir = fs::temp_directory_path() / "netsense_test_cli";
	fs::create_directories(dir);
	return dir;
}

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

std::string last_line(const std::string& text)
{
	auto end = text.find_last_not_of('\n');
	auto start = text.rfind('\n', end);
	return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}

TEST_CASE("coverage")
{
	const auto r = run({"coverage", "--rcs-dbsm", "-10"});
	REQUIRE(r.code == 0);
	const auto line = last_line(r.out);
	REQUIRE(line.rfind("max_range_m,", 0) == 0);
	CHECK(std::stod(line.substr(12)) == doctest::Approx(413.43).epsilon(0.01));

	const auto v = run({"coverage", "--rcs-dbsm", "15"});
	CHECK(std::stod(last_line(v.out).substr(12)) == doctest::Approx(1743.43).epsilon(0.01));
}

TEST_CASE("exit codes")
{
	CHECK(run({}).code == 2);
	CHECK(run({"frobnicate"}).code == 2);
	CHECK(run({"coverage", "--no-such-flag"}).code == 2);
	CHECK(run({"coverage", "--pt-watts", "-1"}).code == 1);
	CHECK(run({"associate"}).code == 2);
	CHECK(run({"associate", "--scene", "/nonexistent/scene.json"}).code == 1);
	CHECK(run({"--help"}).code == 0);
}

TEST_CASE("the installed binary forwards exit codes")
{
	const char* exe = std::getenv("NETSENSE_CLI");
	if (!exe) return;
	const auto status = [&](const std::string& args) {
		const int raw = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
		return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
	};
	CHECK(status("") == 2);
	CHECK(status("coverage") == 0);
	CHECK(status("coverage --bandwidth-hz 0") == 1);
}

TEST_CASE("associate on the worked examples")
{
	auto r = run({"associate", "--scene", scene("example1.json"), "--tol", "1e-6"});
	REQUIRE(r.code == 0);
	auto j = nlohmann::json::parse(r.out);
	CHECK(j["feasible_count"] == 2);
	CHECK(j["unique"] == false);
	CHECK(j["ghost_positions"].size() == 2);

	r = run({"associate", "--scene", scene("example2.json"), "--tol", "1e-6"});
	REQUIRE(r.code == 0);
	CHECK(nlohmann::json::parse(r.out)["feasible_count"] == 1);

	r = run({"associate", "--scene", scene("example2.json"), "--tol", "1e-6", "--solver", "bnb"});
	REQUIRE(r.code == 0);
	j = nlohmann::json::parse(r.out);
	CHECK(j["solver"] == "bnb");
	CHECK(j["ghost_positions"].empty());

	const auto profiles = scratch() / "profiles.csv";
	std::ofstream(profiles) << "anchor_id,distance_m\nbs1,7.158910531638177\nbs1,3.0413812651491097\n"
	                           "bs2,3.605551275463989\nbs2,8.54400374531753\nbs3,8.077747210701755\n"
	                           "bs3,3.3541019662496847\n";
	r = run({"associate", "--scene", scene("example1.json"), "--profiles", profiles.string(), "--tol", "1e-6"});
	REQUIRE(r.code == 0);
	CHECK(nlohmann::json::parse(r.out)["feasible_count"] == 2);
}

TEST_CASE("localize and irs")
{
	const auto meas = scratch() / "ranges.csv";
	std::ofstream(meas) << "bs1,7.158910531638177\nbs2,3.605551275463989\nbs3,8.077747210701755\n";
	auto r = run({"localize", "--scene", scene("example1.json"), "--measurements", meas.string()});
	REQUIRE(r.code == 0);
	auto j = nlohmann::json::parse(r.out);
	CHECK(j["position"]["x"].get<double>() == doctest::Approx(3.0));
	CHECK(j["position"]["y"].get<double>() == doctest::Approx(3.0));

	r = run({"irs", "--scene", scene("irs_example.json")});
	REQUIRE(r.code == 0);
	j = nlohmann::json::parse(r.out);
	CHECK(j["estimate"]["position"]["x"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
	CHECK(j["estimate"]["position"]["y"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
	CHECK(run({"irs", "--scene", scene("example1.json")}).code == 1);
}

TEST_CASE("ambiguity")
{
	const auto csv = (scratch() / "amb.csv").string();
	auto r = run({"ambiguity", "--waveform", "zc", "--length", "63", "--root", "25", "--out", csv});
	REQUIRE(r.code == 0);
	CHECK(r.out.find("waveform,") == 0);
	CHECK(fs::exists(csv));
	CHECK(run({"ambiguity", "--waveform", "ofdm", "--length", "63"}).code == 1);
	CHECK(run({"ambiguity", "--waveform", "chirp"}).code == 2);
}

TEST_CASE("every subcommand is reproducible")
{
	const auto dir = scratch().string();
	const std::vector<std::vector<std::string>> commands{
		{"coverage"},
		{"ambiguity", "--waveform", "ofdm", "--length", "64", "--out", "amb.csv"},
		{"associate", "--scene", scene("example1.json"), "--tol", "1e-6"},
		{"ghosts", "--trials", "50", "--out", "g.csv"},
		{"irs", "--scene", scene("irs_example.json")},
		{"montecarlo", "--mode", "accuracy", "--trials", "20", "--sigma-list", "0,0.1", "--out", "mc.json"},
	};
	for (const auto& cmd : commands)
	{
		CAPTURE(cmd.front());
		std::vector<std::string> args{"--out-dir", dir};
		args.insert(args.end(), cmd.begin(), cmd.end());
		const auto a = run(args);
		const auto b = run(args);
		REQUIRE(a.code == 0);
		CHECK(a.out == b.out);
	}

	std::string reports[2];
	for (int i = 0; i < 2; ++i)
	{
		const std::string threads = i == 0 ? "1" : "4";
		REQUIRE(run({"--out-dir", dir, "montecarlo", "--mode", "accuracy", "--trials", "30", "--threads", threads,
		             "--out", "mc" + threads + ".json"})
		            .code == 0);
		reports[i] = slurp(scratch() / ("mc" + threads + ".json")) + slurp(scratch() / ("mc" + threads + ".csv"));
	}
	CHECK(reports[0] == reports[1]);
}

TEST_CASE("run configurations replay")
{
	const auto cfg_path = (scratch() / "run.json").string();
	const std::vector<std::string> cmd{"--save-config", cfg_path, "associate", "--scene",
	                                   scene("example1.json"), "--tol", "1e-6", "--seed", "9"};
	const auto first = run(cmd);
	REQUIRE(first.code == 0);
	const auto cfg = run_config_from_json(nlohmann::json::parse(slurp(cfg_path)));
	CHECK(cfg.subcommand == "associate");
	CHECK(cfg.seed == 9);
	CHECK(cfg.scene == scene("example1.json"));
	CHECK(cfg.overrides.at("--tol") == "1e-6");
	CHECK(run_config_from_json(to_json(cfg)) == cfg);

	const auto replay = run({"--config", cfg_path});
	REQUIRE(replay.code == 0);
	CHECK(replay.out == first.out);

	CHECK(run({"coverage", "--config", cfg_path}).code == 2);
	CHECK_THROWS(run_config_from_json(nlohmann::json{{"subcommand", "coverage"}, {"bogus", 1}}));
}

TEST_CASE("seed from the environment")
{
	const auto dir = scratch().string();
	const std::vector<std::string> args{"--out-dir", dir, "ghosts", "--trials", "5", "--out", "env.csv"};
	const auto csv = scratch() / "env.csv";
	::setenv(kSeedEnv, "123", 1);
	const auto a = run(args);
	const auto a_csv = slurp(csv);
	run({"--out-dir", dir, "ghosts", "--trials", "5", "--out", "env.csv", "--seed", "123"});
	const auto explicit_csv = slurp(csv);
	::setenv(kSeedEnv, "124", 1);
	run(args);
	const auto b_csv = slurp(csv);
	::setenv(kSeedEnv, "oops", 1);
	const auto bad = run(args);
	::unsetenv(kSeedEnv);
	REQUIRE(a.code == 0);
	CHECK(a_csv == explicit_csv);
	CHECK(a_csv != b_csv);
	CHECK(bad.code == 2);
}
