#ifndef NETSENSE_REPORT_HPP
#define NETSENSE_REPORT_HPP

#include <string>

#include <json.hpp>

#include "netsense/association.hpp"
#include "netsense/sim_harness.hpp"
#include "netsense/waveform.hpp"

namespace netsense {

/// JSON forms. Objects use nlohmann::json's default std::map storage, so keys come out sorted.
nlohmann::json to_json(const PositionEstimate& est);
nlohmann::json to_json(const AssociationSolution& sol);
nlohmann::json to_json(const GhostReport& report);
nlohmann::json to_json(const Aggregates& agg);
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const GhostProbability& result);

/// A table with a header row. Cells are preformatted strings.
struct CsvTable
{
	std::vector<std::string> header;
	std::vector<std::vector<std::string>> rows;

	[[nodiscard]] std::string str() const;
};

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// Rows = delay, columns = Doppler bins, values in dB (floored at kSidelobeFloorDb).
CsvTable to_csv(const AmbiguitySurface& surface);
/// One row per (level, trial).
CsvTable to_csv(const ExperimentReport& report);
CsvTable to_csv(const GhostProbability& result);

/// Writes JSON (2-space indent, trailing newline) or CSV. Throws IoError on failure.
void emit_report(const nlohmann::json& report, const std::string& path);
void emit_report(const CsvTable& table, const std::string& path);

}

#endif
