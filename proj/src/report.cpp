#include "netsense/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netsense/errors.hpp"

namespace netsense {

namespace {

nlohmann::json point_json(Point2 p) { return {{"x", p.x}, {"y", p.y}}; }

}

nlohmann::json to_json(const PositionEstimate& est)
{
	return {{"position", point_json(est.position)},
	        {"residual_rms_m", est.residual_rms_m},
	        {"converged", est.converged},
	        {"iterations", est.iterations}};
}

nlohmann::json to_json(const AssociationSolution& sol)
{
	nlohmann::json j;
	j["hypothesis"] = sol.hypothesis.perms;
	j["estimates"] = nlohmann::json::array();
	for (const auto& e : sol.estimates) j["estimates"].push_back(to_json(e));
	j["max_residual_m"] = sol.max_residual_m;
	return j;
}

nlohmann::json to_json(const GhostReport& report)
{
	nlohmann::json j;
	j["unique"] = report.unique;
	j["feasible_count"] = report.feasible_solutions.size();
	j["feasible_solutions"] = nlohmann::json::array();
	for (const auto& s : report.feasible_solutions) j["feasible_solutions"].push_back(to_json(s));
	j["ghost_positions"] = nlohmann::json::array();
	for (const auto& p : report.ghost_positions) j["ghost_positions"].push_back(point_json(p));
	return j;
}

nlohmann::json to_json(const Aggregates& agg)
{
	return {{"trials", agg.trials},
	        {"completed", agg.completed},
	        {"partial", agg.partial},
	        {"infeasible", agg.infeasible},
	        {"ghost_trials", agg.ghost_trials},
	        {"ghost_fraction", agg.ghost_fraction},
	        {"truth_recovered_rate", agg.truth_recovered_rate},
	        {"correct_rate", agg.correct_rate},
	        {"rmse_m", agg.rmse_m},
	        {"detection_fraction", agg.detection_fraction}};
}

nlohmann::json to_json(const ExperimentReport& report)
{
	nlohmann::json j;
	j["mode"] = report.mode;
	j["seed"] = report.seed;
	j["trials"] = report.trials;
	j["levels"] = nlohmann::json::array();
	for (const auto& level : report.levels)
	{
		nlohmann::json l;
		l["sigma_m"] = level.sigma_m;
		l["feas_tol_m"] = level.feas_tol_m;
		l["aggregates"] = to_json(level.aggregates);
		l["records"] = nlohmann::json::array();
		for (const auto& r : level.records)
			l["records"].push_back({{"index", r.index},
			                        {"seed", r.seed},
			                        {"status", to_string(r.status)},
			                        {"feasible_count", r.feasible_count},
			                        {"truth_recovered", r.truth_recovered},
			                        {"selected_correct", r.selected_correct},
			                        {"detected_pairs", r.detected_pairs},
			                        {"total_pairs", r.total_pairs},
			                        {"position_errors_m", r.position_errors_m}});
		j["levels"].push_back(std::move(l));
	}
	return j;
}

nlohmann::json to_json(const GhostProbability& result)
{
	return {{"fraction", result.fraction},
	        {"trials", result.trials},
	        {"ghost_trials", result.ghost_trials},
	        {"infeasible_trials", result.infeasible_trials},
	        {"offending_seeds", result.offending_seeds}};
}

std::string format_double(double v)
{
	char buf[64];
	auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string CsvTable::str() const
{
	std::ostringstream out;
	auto line = [&](const std::vector<std::string>& cells) {
		for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
		out << '\n';
	};
	line(header);
	for (const auto& row : rows) line(row);
	return out.str();
}

CsvTable to_csv(const AmbiguitySurface& surface)
{
	CsvTable t;
	t.header.push_back("delay");
	for (std::size_t c = 0; c < surface.doppler_bins; ++c)
		t.header.push_back("doppler_" + std::to_string(surface.doppler_value(c)));
	for (std::size_t d = 0; d < surface.delay_bins; ++d)
	{
		std::vector<std::string> row{std::to_string(d)};
		for (std::size_t c = 0; c < surface.doppler_bins; ++c)
		{
			const double db = 20.0 * std::log10(surface.at(d, c));
			row.push_back(format_double(std::isfinite(db) ? std::max(db, kSidelobeFloorDb) : kSidelobeFloorDb));
		}
		t.rows.push_back(std::move(row));
	}
	return t;
}

CsvTable to_csv(const ExperimentReport& report)
{
	CsvTable t;
	t.header = {"sigma_m",        "trial",         "seed",           "status",      "feasible_count", "truth_recovered",
	            "selected_correct", "detected_pairs", "total_pairs",  "position_errors_m"};
	for (const auto& level : report.levels)
		for (const auto& r : level.records)
		{
			std::string errors;
			for (std::size_t i = 0; i < r.position_errors_m.size(); ++i)
				errors += (i ? ";" : "") + format_double(r.position_errors_m[i]);
			t.rows.push_back({format_double(level.sigma_m), std::to_string(r.index), std::to_string(r.seed),
			                  to_string(r.status), std::to_string(r.feasible_count), r.truth_recovered ? "1" : "0",
			                  r.selected_correct ? "1" : "0", std::to_string(r.detected_pairs),
			                  std::to_string(r.total_pairs), errors});
		}
	return t;
}

CsvTable to_csv(const GhostProbability& result)
{
	CsvTable t;
	t.header = {"trial", "seed", "feasible_count", "ghost"};
	for (const auto& trial : result.log)
		t.rows.push_back({std::to_string(trial.index), std::to_string(trial.seed), std::to_string(trial.feasible_count),
		                  trial.feasible_count > 1 ? "1" : "0"});
	return t;
}

namespace {

void write_text(const std::string& text, const std::string& path)
{
	std::ofstream out(path, std::ios::binary);
	if (!out) throw IoError("cannot write " + path);
	out << text;
	out.close();
	if (!out) throw IoError("error writing " + path);
}

}

void emit_report(const nlohmann::json& report, const std::string& path) { write_text(report.dump(2) + "\n", path); }

void emit_report(const CsvTable& table, const std::string& path) { write_text(table.str(), path); }

}
