#ifndef NETSENSE_SIM_HARNESS_HPP
#define NETSENSE_SIM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "netsense/association.hpp"
#include "netsense/link_budget.hpp"
#include "netsense/scene.hpp"

namespace netsense {

struct NoiseModel
{
	double range_sigma_m = 0.0;
	bool quantize_to_resolution = false;
	/// Sets the quantisation step c / (2B).
	double bandwidth_hz = 800e6;
};

struct Measurements
{
	std::vector<DistanceProfile> profiles;       // one per active BS, shuffled
	std::vector<std::vector<std::size_t>> truth;  // [bs][entry] -> target index
	std::vector<std::vector<bool>> detected;      // [bs][target]

	[[nodiscard]] bool full_detection() const;
	[[nodiscard]] std::size_t detected_pairs() const;
	/// The association that matches the ground truth; only defined under full detection.
	[[nodiscard]] AssociationHypothesis truth_hypothesis() const;
};

/// Every covered (BS, target) pair contributes true distance + N(0, sigma), optionally rounded
/// to the range-resolution grid. Coverage uses each target's own RCS. Entries are shuffled per BS.
Measurements measure_distances(const Scene& scene, const LinkBudgetParams& link, double snr_min_db,
                               const NoiseModel& noise, std::uint64_t seed);

struct RandomSceneSpec
{
	std::size_t num_bs = 3;
	std::size_t num_targets = 2;
	Bounds bounds{0.0, 0.0, 300.0, 300.0};
	double rcs_dbsm = -10.0;
};

struct ExperimentSpec
{
	std::variant<Scene, RandomSceneSpec> scene = RandomSceneSpec{};
	LinkBudgetParams::Db link{};
	double snr_min_db = 10.0;
	NoiseModel noise{};
	/// Noise levels swept by the accuracy experiment.
	std::vector<double> sigma_list{0.0};
	std::size_t trials = 1;
	std::uint64_t seed = 0;
	double feas_tol_m = kExactFeasibilityTol;
	/// 0 = hardware concurrency. Results never depend on it.
	std::size_t threads = 0;
};

enum class TrialStatus
{
	Complete,
	Partial,     // some BS missed some target; excluded from the headline aggregates
	Infeasible,  // no association met the tolerance
};

const char* to_string(TrialStatus status);

struct TrialRecord
{
	std::size_t index = 0;
	std::uint64_t seed = 0;
	TrialStatus status = TrialStatus::Complete;
	std::size_t feasible_count = 0;
	bool truth_recovered = false;
	bool selected_correct = false;
	std::size_t detected_pairs = 0;
	std::size_t total_pairs = 0;
	std::vector<double> position_errors_m;
};

struct Aggregates
{
	std::size_t trials = 0;
	std::size_t completed = 0;
	std::size_t partial = 0;
	std::size_t infeasible = 0;
	std::size_t ghost_trials = 0;
	double ghost_fraction = 0.0;
	double truth_recovered_rate = 0.0;
	double correct_rate = 0.0;
	double rmse_m = 0.0;
	double detection_fraction = 0.0;

	friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

/// Headline rates are over completed trials; infeasible trials count as completed but
/// incorrect. Empty inputs give all-zero aggregates.
Aggregates compute_aggregates(const std::vector<TrialRecord>& records);

struct LevelReport
{
	double sigma_m = 0.0;
	double feas_tol_m = 0.0;
	std::vector<TrialRecord> records;
	Aggregates aggregates;
};

struct ExperimentReport
{
	std::string mode;
	std::uint64_t seed = 0;
	std::size_t trials = 0;
	std::vector<LevelReport> levels;
};

/// Exact ranges, exhaustive enumeration per trial.
ExperimentReport run_uniqueness_experiment(const ExperimentSpec& spec);

/// Branch-and-bound association on noisy ranges, one level per entry of sigma_list. Trial i
/// sees the same scene and the same standard-normal draws at every level.
ExperimentReport run_accuracy_experiment(const ExperimentSpec& spec);

/// Tolerance the accuracy experiment uses at a given noise level.
double level_feasibility_tol(const ExperimentSpec& spec, double sigma_m, std::size_t num_anchors);

}

#endif
