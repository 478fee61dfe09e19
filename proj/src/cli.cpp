#include "netsense/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "netsense/association.hpp"
#include "netsense/errors.hpp"
#include "netsense/irs_ranging.hpp"
#include "netsense/link_budget.hpp"
#include "netsense/localization.hpp"
#include "netsense/report.hpp"
#include "netsense/scene.hpp"
#include "netsense/sim_harness.hpp"
#include "netsense/waveform.hpp"

namespace netsense::cli {

nlohmann::json to_json(const RunConfig& cfg)
{
	return {{"subcommand", cfg.subcommand},
	        {"scene", cfg.scene},
	        {"seed", cfg.seed},
	        {"out_dir", cfg.out_dir},
	        {"overrides", cfg.overrides}};
}

RunConfig run_config_from_json(const nlohmann::json& j)
{
	static const std::vector<std::string> known{"subcommand", "scene", "seed", "out_dir", "overrides"};
	if (!j.is_object()) throw IoError("run config: expected a JSON object");
	for (const auto& [key, value] : j.items())
		if (std::find(known.begin(), known.end(), key) == known.end()) throw IoError("run config: unknown key " + key);
	try
	{
		RunConfig cfg;
		cfg.subcommand = j.at("subcommand").get<std::string>();
		cfg.scene = j.value("scene", std::string{});
		cfg.seed = j.value("seed", kDefaultSeed);
		cfg.out_dir = j.value("out_dir", std::string{"."});
		if (j.contains("overrides")) cfg.overrides = j.at("overrides").get<std::map<std::string, std::string>>();
		return cfg;
	}
	catch (const nlohmann::json::exception& e)
	{
		throw IoError(std::string("run config: ") + e.what());
	}
}

std::vector<std::string> to_args(const RunConfig& cfg)
{
	std::vector<std::string> args{"--out-dir", cfg.out_dir, cfg.subcommand};
	if (!cfg.scene.empty())
	{
		args.emplace_back("--scene");
		args.push_back(cfg.scene);
	}
	args.emplace_back("--seed");
	args.push_back(std::to_string(cfg.seed));
	for (const auto& [flag, value] : cfg.overrides)
	{
		args.push_back(flag);
		if (!value.empty()) args.push_back(value);
	}
	return args;
}

namespace {

class UsageError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path)
{
	std::ifstream in(path);
	if (!in) throw IoError("cannot open " + path);
	std::vector<std::vector<std::string>> rows;
	std::string line;
	while (std::getline(in, line))
	{
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty() || line.front() == '#') continue;
		std::vector<std::string> cells;
		std::stringstream ss(line);
		std::string cell;
		while (std::getline(ss, cell, ','))
		{
			cell.erase(0, cell.find_first_not_of(" \t"));
			cell.erase(cell.find_last_not_of(" \t") + 1);
			cells.push_back(cell);
		}
		rows.push_back(std::move(cells));
	}
	return rows;
}

double parse_number(const std::string& s, const std::string& context)
{
	try
	{
		std::size_t used = 0;
		const double v = std::stod(s, &used);
		if (used == s.size()) return v;
	}
	catch (const std::exception&)
	{
	}
	throw IoError(context + ": not a number: '" + s + "'");
}

// Data rows of a CSV whose second column is numeric; a leading header row is skipped.
std::vector<std::vector<std::string>> data_rows(const std::string& path, std::size_t min_columns)
{
	auto rows = read_csv(path);
	if (!rows.empty() && rows.front().size() >= 2)
	{
		char* end = nullptr;
		const std::string& probe = rows.front()[1];
		std::strtod(probe.c_str(), &end);
		if (end == probe.c_str()) rows.erase(rows.begin());
	}
	for (const auto& row : rows)
		if (row.size() < min_columns)
			throw IoError(path + ": expected at least " + std::to_string(min_columns) + " columns per row");
	return rows;
}

std::uint64_t default_seed()
{
	if (const char* env = std::getenv(kSeedEnv); env && *env)
	{
		try
		{
			std::size_t used = 0;
			const auto v = std::stoull(env, &used);
			if (used == std::string(env).size()) return v;
		}
		catch (const std::exception&)
		{
		}
		throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer");
	}
	return kDefaultSeed;
}

Scene require_scene(const std::string& path, std::size_t min_active_bs)
{
	if (path.empty()) throw UsageError("--scene is required");
	Scene scene = load_scene(path);
	ValidationOptions options;
	options.min_active_bs = min_active_bs;
	const auto report = validate_scene(scene, options);
	if (!report.valid())
	{
		std::string msg = "invalid scene " + path + ":";
		for (const auto& v : report.violations) msg += std::string(" ") + to_string(v.kind) + "(" + v.detail + ")";
		throw DomainError(msg);
	}
	return scene;
}

std::vector<Point2> target_positions(const Scene& scene)
{
	std::vector<Point2> out;
	for (const auto& t : scene.targets) out.push_back(t.position);
	return out;
}

struct Context
{
	std::ostream& out;
	std::ostream& err;
	std::string out_dir;
	std::uint64_t seed;

	[[nodiscard]] std::string output_path(const std::string& path) const
	{
		const std::filesystem::path p(path);
		if (p.is_absolute() || out_dir.empty() || out_dir == ".") return path;
		return (std::filesystem::path(out_dir) / p).string();
	}
};

struct CoverageArgs
{
	LinkBudgetParams::Db link{};
	double snr_min_db = 10.0;
	double range_min = 50.0;
	double range_max = 2000.0;
	double range_step = 50.0;
	std::string out;
};

void run_coverage(const CoverageArgs& a, const Context& ctx)
{
	const LinkBudgetParams params(a.link);
	if (!(a.range_min > 0.0) || !(a.range_step > 0.0) || a.range_max < a.range_min)
		throw DomainError("coverage: need 0 < range-min <= range-max and range-step > 0");
	CsvTable table;
	table.header = {"range_m", "snr_db"};
	const auto steps = static_cast<std::size_t>(std::floor((a.range_max - a.range_min) / a.range_step + 1e-9));
	for (std::size_t i = 0; i <= steps; ++i)
	{
		const double r = a.range_min + static_cast<double>(i) * a.range_step;
		table.rows.push_back({format_double(r), format_double(sensing_snr(params, r).db)});
	}
	if (!a.out.empty()) emit_report(table, ctx.output_path(a.out));
	ctx.out << table.str();
	ctx.out << "max_range_m," << format_double(max_sensing_range(params, a.snr_min_db)) << '\n';
}

struct AmbiguityArgs
{
	std::string waveform = "zc";
	std::size_t length = 63;
	std::size_t root = 25;
	std::size_t cp = 16;
	std::size_t constellation = 4;
	std::size_t doppler_bins = 16;
	std::string mode = "cyclic";
	std::size_t exclusion = 1;
	std::string out = "ambiguity.csv";
};

void run_ambiguity(const AmbiguityArgs& a, const Context& ctx)
{
	const ComplexSequence seq =
		a.waveform == "zc" ? zadoff_chu(a.length, a.root) : ofdm_symbol(a.length, a.cp, ctx.seed, a.constellation);
	const auto surface =
		ambiguity(seq, a.doppler_bins, a.mode == "cyclic" ? AmbiguityMode::Cyclic : AmbiguityMode::Linear);
	const auto metrics = sidelobe_metrics(surface, a.exclusion);
	emit_report(to_csv(surface), ctx.output_path(a.out));
	ctx.out << "waveform," << seq.label << '\n'
	        << "samples," << seq.samples.size() << '\n'
	        << "psl_db," << format_double(metrics.psl_db) << '\n'
	        << "isl_db," << format_double(metrics.isl_db) << '\n';
}

struct LocalizeArgs
{
	std::string scene;
	std::string measurements;
};

void run_localize(const LocalizeArgs& a, const Context& ctx)
{
	const Scene scene = require_scene(a.scene, 0);
	if (a.measurements.empty()) throw UsageError("--measurements is required");
	std::vector<Anchor> anchors;
	std::vector<RangeMeasurement> measurements;
	for (const auto& row : data_rows(a.measurements, 2))
	{
		const Anchor* anchor = scene.find_anchor(row[0]);
		if (!anchor) throw DomainError("localize: unknown anchor " + row[0]);
		anchors.push_back(*anchor);
		measurements.push_back({row[0], parse_number(row[1], a.measurements),
		                        row.size() > 2 ? parse_number(row[2], a.measurements) : 0.0});
	}
	const auto est = trilaterate(anchors, measurements);
	ctx.out << netsense::to_json(est).dump(2) << '\n';
}

struct AssociateArgs
{
	std::string scene;
	std::string profiles;
	double tol = kExactFeasibilityTol;
	std::string solver = "exhaustive";
	double match_radius = 1e-3;
	std::string out;
};

void run_associate(const AssociateArgs& a, const Context& ctx)
{
	const Scene scene = require_scene(a.scene, 3);
	const auto bss = scene.active_bss();
	std::vector<DistanceProfile> profiles;
	if (a.profiles.empty())
	{
		if (scene.targets.empty()) throw DomainError("associate: scene has no targets and no --profiles given");
		profiles = exact_profiles(scene);
	}
	else
	{
		for (const auto& bs : bss) profiles.push_back({bs.id, {}});
		for (const auto& row : data_rows(a.profiles, 2))
		{
			auto it = std::find_if(profiles.begin(), profiles.end(), [&](const auto& p) { return p.anchor_id == row[0]; });
			if (it == profiles.end()) throw DomainError("associate: unknown BS " + row[0]);
			it->distances.push_back(parse_number(row[1], a.profiles));
		}
	}
	AssociationOptions options;
	options.feas_tol_m = a.tol;
	const auto truth = target_positions(scene);
	std::optional<std::span<const Point2>> truth_span;
	if (!truth.empty()) truth_span = std::span<const Point2>(truth);

	nlohmann::json j;
	if (a.solver == "bnb")
	{
		auto report = make_ghost_report({solve_association_bnb(profiles, bss, options)}, truth_span, a.match_radius);
		j = {{"solver", "bnb"},
		     {"solution", netsense::to_json(report.feasible_solutions.front())},
		     {"ghost_positions", netsense::to_json(report)["ghost_positions"]}};
	}
	else
	{
		j = netsense::to_json(make_ghost_report(enumerate_feasible(profiles, bss, options), truth_span, a.match_radius));
		j["solver"] = "exhaustive";
	}
	if (!a.out.empty()) emit_report(j, ctx.output_path(a.out));
	ctx.out << j.dump(2) << '\n';
}

struct GhostsArgs
{
	std::size_t trials = 1000;
	std::size_t bs = 3;
	std::size_t targets = 2;
	double extent = 300.0;
	double tol = kExactFeasibilityTol;
	std::size_t threads = 0;
	std::string out = "ghosts.csv";
};

void run_ghosts(const GhostsArgs& a, const Context& ctx)
{
	const auto result =
		ghost_probability(a.trials, a.bs, a.targets, Bounds{0.0, 0.0, a.extent, a.extent}, a.tol, ctx.seed, a.threads);
	emit_report(to_csv(result), ctx.output_path(a.out));
	ctx.out << netsense::to_json(result).dump(2) << '\n';
}

struct IrsArgs
{
	std::string scene;
	std::string measurements;
};

void run_irs(const IrsArgs& a, const Context& ctx)
{
	const Scene scene = require_scene(a.scene, 2);
	const auto irss = scene.irss();
	if (irss.size() != 1) throw DomainError("irs: scene must contain exactly one IRS");
	const Anchor& irs = irss.front();

	std::vector<IrsPathMeasurement> paths;
	if (a.measurements.empty())
	{
		if (scene.targets.empty()) throw DomainError("irs: scene has no target and no --measurements given");
		for (const auto& bs : scene.active_bss())
			paths.push_back(synthesize_irs_paths(bs, irs, scene.targets.front().position));
	}
	else
	{
		for (const auto& row : data_rows(a.measurements, 4))
			paths.push_back({row[0], row[1], parse_number(row[2], a.measurements), parse_number(row[3], a.measurements)});
	}

	std::vector<Anchor> bss;
	std::vector<RangeMeasurement> ranges;
	nlohmann::json per_path = nlohmann::json::array();
	double irs_sum = 0.0;
	for (const auto& p : paths)
	{
		const Anchor* bs = scene.find_anchor(p.bs_id);
		if (!bs || bs->kind != AnchorKind::ActiveBS) throw DomainError("irs: unknown BS " + p.bs_id);
		if (p.irs_id != irs.id) throw DomainError("irs: unknown IRS " + p.irs_id);
		const double l2 = irs_target_distance(p, bs->position, irs.position);
		irs_sum += l2;
		bss.push_back(*bs);
		ranges.push_back({bs->id, p.direct_roundtrip_m / 2.0, 0.0});
		per_path.push_back({{"bs_id", p.bs_id}, {"irs_distance_m", l2}});
	}
	if (paths.empty()) throw DomainError("irs: no path measurements");
	const double irs_distance = irs_sum / static_cast<double>(paths.size());
	const auto est = localize_with_heterogeneous_anchors(bss, ranges, irs, irs_distance);
	const nlohmann::json j{{"irs_id", irs.id}, {"irs_distance_m", irs_distance}, {"per_path", per_path},
	                       {"estimate", netsense::to_json(est)}};
	ctx.out << j.dump(2) << '\n';
}

struct MonteCarloArgs
{
	std::string mode = "uniqueness";
	std::string scene;
	std::size_t trials = 1000;
	std::size_t bs = 3;
	std::size_t targets = 2;
	double extent = 300.0;
	double rcs_dbsm = -10.0;
	double snr_min_db = 10.0;
	std::vector<double> sigma_list{0.0, 0.01, 0.1, 1.0};
	bool quantize = false;
	double bandwidth_hz = 800e6;
	double tol = kExactFeasibilityTol;
	std::size_t threads = 0;
	std::string out = "report.json";
	std::string csv;
};

void run_montecarlo(const MonteCarloArgs& a, const Context& ctx)
{
	ExperimentSpec spec;
	if (!a.scene.empty())
		spec.scene = require_scene(a.scene, 3);
	else
		spec.scene = RandomSceneSpec{a.bs, a.targets, Bounds{0.0, 0.0, a.extent, a.extent}, a.rcs_dbsm};
	spec.snr_min_db = a.snr_min_db;
	spec.noise.quantize_to_resolution = a.quantize;
	spec.noise.bandwidth_hz = a.bandwidth_hz;
	spec.sigma_list = a.sigma_list;
	spec.trials = a.trials;
	spec.seed = ctx.seed;
	spec.feas_tol_m = a.tol;
	spec.threads = a.threads;

	const auto report = a.mode == "accuracy" ? run_accuracy_experiment(spec) : run_uniqueness_experiment(spec);
	const std::string json_path = ctx.output_path(a.out);
	std::string csv_path = a.csv.empty() ? std::filesystem::path(a.out).replace_extension(".csv").string() : a.csv;
	csv_path = ctx.output_path(csv_path);
	emit_report(netsense::to_json(report), json_path);
	emit_report(to_csv(report), csv_path);

	nlohmann::json summary = nlohmann::json::array();
	for (const auto& level : report.levels)
		summary.push_back({{"sigma_m", level.sigma_m}, {"feas_tol_m", level.feas_tol_m},
		                   {"aggregates", netsense::to_json(level.aggregates)}});
	ctx.out << summary.dump(2) << '\n';
}

void add_seed(CLI::App* sub, std::optional<std::uint64_t>& seed)
{
	sub->add_option("--seed", seed, "RNG seed (default: $NETSENSE_SEED or " + std::to_string(kDefaultSeed) + ")");
}

std::string joined_results(const CLI::Option* opt)
{
	std::string s;
	for (const auto& r : opt->results()) s += (s.empty() ? "" : ",") + r;
	return s;
}

}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"netsense: networked device-free sensing toolkit"};
	app.require_subcommand(1);
	app.fallthrough();

	std::string out_dir = ".";
	std::string config_path;
	std::string save_config;
	app.add_option("--out-dir", out_dir, "Directory for relative output paths");
	app.add_option("--config", config_path, "Replay a saved run configuration (JSON)");
	app.add_option("--save-config", save_config, "Write this run's configuration (JSON)");

	std::optional<std::uint64_t> seed;

	CoverageArgs cov;
	auto* coverage = app.add_subcommand("coverage", "Sensing SNR vs range and maximum coverage range");
	coverage->add_option("--pt-watts", cov.link.pt_watts, "Transmit power P_t (W)")->capture_default_str();
	coverage->add_option("--gt-dbi", cov.link.gt_dbi, "Transmit antenna gain G_t (dBi)")->capture_default_str();
	coverage->add_option("--gr-dbi", cov.link.gr_dbi, "Receive antenna gain G_r (dBi)")->capture_default_str();
	coverage->add_option("--gp-db", cov.link.gp_db, "Processing gain G_p (dB)")->capture_default_str();
	coverage->add_option("--carrier-hz", cov.link.carrier_hz, "Carrier frequency (Hz)")->capture_default_str();
	coverage->add_option("--rcs-dbsm", cov.link.rcs_dbsm, "Radar cross section (dBsm)")->capture_default_str();
	coverage->add_option("--temperature-k", cov.link.temperature_k, "Noise temperature T_0 (K)")->capture_default_str();
	coverage->add_option("--bandwidth-hz", cov.link.bandwidth_hz, "Bandwidth B (Hz)")->capture_default_str();
	coverage->add_option("--noise-factor-db", cov.link.noise_factor_db, "Noise factor N_f (dB)")->capture_default_str();
	coverage->add_option("--snr-min-db", cov.snr_min_db, "Minimum sensing SNR (dB)")->capture_default_str();
	coverage->add_option("--range-min", cov.range_min, "First tabulated range (m)")->capture_default_str();
	coverage->add_option("--range-max", cov.range_max, "Last tabulated range (m)")->capture_default_str();
	coverage->add_option("--range-step", cov.range_step, "Range step (m)")->capture_default_str();
	coverage->add_option("--out", cov.out, "Also write the table to this CSV file");
	add_seed(coverage, seed);

	AmbiguityArgs amb;
	auto* amb_cmd = app.add_subcommand("ambiguity", "Delay-Doppler ambiguity surface and side-lobe levels");
	amb_cmd->add_option("--waveform", amb.waveform)->check(CLI::IsMember({"zc", "ofdm"}))->capture_default_str();
	amb_cmd->add_option("--length", amb.length, "ZC length or OFDM subcarrier count")->capture_default_str();
	amb_cmd->add_option("--root", amb.root, "ZC root")->capture_default_str();
	amb_cmd->add_option("--cp", amb.cp, "OFDM cyclic prefix length")->capture_default_str();
	amb_cmd->add_option("--constellation", amb.constellation, "OFDM PSK order")->capture_default_str();
	amb_cmd->add_option("--doppler-bins", amb.doppler_bins)->capture_default_str();
	amb_cmd->add_option("--mode", amb.mode)->check(CLI::IsMember({"cyclic", "linear"}))->capture_default_str();
	amb_cmd->add_option("--exclusion", amb.exclusion, "Main-lobe half-width in bins")->capture_default_str();
	amb_cmd->add_option("--out", amb.out, "CSV grid (rows = delay, columns = Doppler, dB)")->capture_default_str();
	add_seed(amb_cmd, seed);

	LocalizeArgs loc;
	auto* loc_cmd = app.add_subcommand("localize", "Trilaterate one target from range measurements");
	loc_cmd->add_option("--scene", loc.scene, "Scene JSON");
	loc_cmd->add_option("--measurements", loc.measurements, "CSV: anchor_id, distance_m[, sigma_m]");
	add_seed(loc_cmd, seed);

	AssociateArgs asc;
	auto* asc_cmd = app.add_subcommand("associate", "Data association and ghost-target report");
	asc_cmd->add_option("--scene", asc.scene, "Scene JSON");
	asc_cmd->add_option("--profiles", asc.profiles, "CSV: anchor_id, distance_m (default: exact scene ranges)");
	asc_cmd->add_option("--tol", asc.tol, "Feasibility tolerance (m)")->capture_default_str();
	asc_cmd->add_option("--solver", asc.solver)->check(CLI::IsMember({"exhaustive", "bnb"}))->capture_default_str();
	asc_cmd->add_option("--match-radius", asc.match_radius, "Ghost match radius (m)")->capture_default_str();
	asc_cmd->add_option("--out", asc.out, "Also write the JSON report here");
	add_seed(asc_cmd, seed);

	GhostsArgs gh;
	auto* gh_cmd = app.add_subcommand("ghosts", "Monte Carlo ghost-target probability");
	gh_cmd->add_option("--trials", gh.trials)->capture_default_str();
	gh_cmd->add_option("--bs", gh.bs, "Active BSs per scene")->capture_default_str();
	gh_cmd->add_option("--targets", gh.targets)->capture_default_str();
	gh_cmd->add_option("--extent", gh.extent, "Square scene side (m)")->capture_default_str();
	gh_cmd->add_option("--tol", gh.tol)->capture_default_str();
	gh_cmd->add_option("--threads", gh.threads, "Worker threads (0 = all cores)")->capture_default_str();
	gh_cmd->add_option("--out", gh.out, "Per-trial CSV")->capture_default_str();
	add_seed(gh_cmd, seed);

	IrsArgs irs;
	auto* irs_cmd = app.add_subcommand("irs", "IRS-assisted ranging and heterogeneous-anchor localization");
	irs_cmd->add_option("--scene", irs.scene, "Scene JSON with one IRS");
	irs_cmd->add_option("--measurements", irs.measurements,
	                    "CSV: bs_id, irs_id, direct_roundtrip_m, composite_roundtrip_m (default: synthesized)");
	add_seed(irs_cmd, seed);

	MonteCarloArgs mc;
	auto* mc_cmd = app.add_subcommand("montecarlo", "Uniqueness or accuracy experiments");
	mc_cmd->add_option("--mode", mc.mode)->check(CLI::IsMember({"uniqueness", "accuracy"}))->capture_default_str();
	mc_cmd->add_option("--scene", mc.scene, "Fixed scene JSON (default: random scenes)");
	mc_cmd->add_option("--trials", mc.trials)->capture_default_str();
	mc_cmd->add_option("--bs", mc.bs)->capture_default_str();
	mc_cmd->add_option("--targets", mc.targets)->capture_default_str();
	mc_cmd->add_option("--extent", mc.extent)->capture_default_str();
	mc_cmd->add_option("--rcs-dbsm", mc.rcs_dbsm)->capture_default_str();
	mc_cmd->add_option("--snr-min-db", mc.snr_min_db)->capture_default_str();
	mc_cmd->add_option("--sigma-list", mc.sigma_list, "Comma-separated range noise levels (m)")
		->delimiter(',')
		->capture_default_str();
	mc_cmd->add_flag("--quantize", mc.quantize, "Round ranges to the c/(2B) grid");
	mc_cmd->add_option("--bandwidth-hz", mc.bandwidth_hz, "Bandwidth for quantisation")->capture_default_str();
	mc_cmd->add_option("--tol", mc.tol)->capture_default_str();
	mc_cmd->add_option("--threads", mc.threads)->capture_default_str();
	mc_cmd->add_option("--out", mc.out, "JSON report")->capture_default_str();
	mc_cmd->add_option("--csv", mc.csv, "Per-trial CSV (default: --out with .csv extension)");
	add_seed(mc_cmd, seed);

	if (args.empty())
	{
		err << app.help();
		return 2;
	}

	std::vector<std::string> effective = args;
	try
	{
		if (effective.size() >= 2 && effective[0] == "--config")
		{
			std::ifstream in(effective[1]);
			if (!in) throw IoError("cannot open config " + effective[1]);
			nlohmann::json j;
			try
			{
				in >> j;
			}
			catch (const nlohmann::json::exception& e)
			{
				throw IoError("config " + effective[1] + ": " + e.what());
			}
			auto replay = to_args(run_config_from_json(j));
			replay.insert(replay.end(), effective.begin() + 2, effective.end());
			effective = std::move(replay);
		}
		else if (std::find(effective.begin(), effective.end(), "--config") != effective.end())
		{
			throw UsageError("--config must come first");
		}

		std::vector<std::string> reversed(effective.rbegin(), effective.rend());
		app.parse(reversed);
	}
	catch (const CLI::ParseError& e)
	{
		if (e.get_exit_code() == 0) return app.exit(e, out, err);
		err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
		return 2;
	}
	catch (const UsageError& e)
	{
		err << "usage error: " << e.what() << '\n';
		return 2;
	}
	catch (const Error& e)
	{
		err << "error: " << e.what() << '\n';
		return 1;
	}

	try
	{
		const CLI::App* sub = app.get_subcommands().front();
		const std::uint64_t resolved_seed = seed ? *seed : default_seed();
		Context ctx{out, err, out_dir, resolved_seed};

		if (!save_config.empty())
		{
			RunConfig cfg;
			cfg.subcommand = sub->get_name();
			cfg.seed = resolved_seed;
			cfg.out_dir = out_dir;
			for (const CLI::Option* opt : sub->get_options())
			{
				if (opt->count() == 0) continue;
				const std::string name = opt->get_name();
				if (name == "--help") continue;
				if (name == "--seed") continue;
				if (name == "--scene")
					cfg.scene = joined_results(opt);
				else
					cfg.overrides[name] = opt->get_expected_min() == 0 ? "" : joined_results(opt);
			}
			emit_report(to_json(cfg), save_config);
		}

		if (sub == coverage)
			run_coverage(cov, ctx);
		else if (sub == amb_cmd)
			run_ambiguity(amb, ctx);
		else if (sub == loc_cmd)
			run_localize(loc, ctx);
		else if (sub == asc_cmd)
			run_associate(asc, ctx);
		else if (sub == gh_cmd)
			run_ghosts(gh, ctx);
		else if (sub == irs_cmd)
			run_irs(irs, ctx);
		else if (sub == mc_cmd)
			run_montecarlo(mc, ctx);
		return 0;
	}
	catch (const UsageError& e)
	{
		err << "usage error: " << e.what() << '\n';
		return 2;
	}
	catch (const Error& e)
	{
		err << "error: " << e.what() << '\n';
		return 1;
	}
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
	std::vector<std::string> args;
	for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
	return parse_and_dispatch(args, out, err);
}

}
