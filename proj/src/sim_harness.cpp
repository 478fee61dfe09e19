#include "netsense/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netsense/errors.hpp"
#include "netsense/parallel.hpp"
#include "netsense/random.hpp"

namespace netsense {

bool Measurements::full_detection() const
{
	for (const auto& row : detected)
		if (std::find(row.begin(), row.end(), false) != row.end()) return false;
	return true;
}

std::size_t Measurements::detected_pairs() const
{
	std::size_t n = 0;
	for (const auto& row : detected) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
	return n;
}

AssociationHypothesis Measurements::truth_hypothesis() const
{
	if (!full_detection()) throw NotSupportedError("truth_hypothesis: partial detection");
	AssociationHypothesis h;
	const std::size_t k_count = truth.empty() ? 0 : truth[0].size();
	h.perms.assign(truth.size(), std::vector<std::size_t>(k_count));
	for (std::size_t k = 0; k < k_count; ++k)
	{
		const std::size_t target = truth[0][k];
		for (std::size_t m = 0; m < truth.size(); ++m)
			h.perms[m][k] = static_cast<std::size_t>(std::find(truth[m].begin(), truth[m].end(), target) - truth[m].begin());
	}
	return h;
}

Measurements measure_distances(const Scene& scene, const LinkBudgetParams& link, double snr_min_db,
                               const NoiseModel& noise, std::uint64_t seed)
{
	if (!(noise.range_sigma_m >= 0.0)) throw DomainError("measure_distances: range_sigma_m must be nonnegative");
	const double step = noise.quantize_to_resolution ? range_resolution(noise.bandwidth_hz) : 0.0;

	std::vector<double> max_range(scene.targets.size());
	for (std::size_t t = 0; t < scene.targets.size(); ++t)
		max_range[t] = max_sensing_range(link.with_rcs_dbsm(scene.targets[t].rcs_dbsm), snr_min_db);

	Rng rng = make_rng(seed);
	std::normal_distribution<double> gauss(0.0, 1.0);
	Measurements out;
	for (const auto& bs : scene.anchors)
	{
		if (bs.kind != AnchorKind::ActiveBS) continue;
		std::vector<std::pair<double, std::size_t>> entries;
		std::vector<bool> detected(scene.targets.size(), false);
		for (std::size_t t = 0; t < scene.targets.size(); ++t)
		{
			// Drawn for every pair so that noise streams line up across detection outcomes and sigmas.
			const double z = gauss(rng);
			const double d = true_distance(bs.position, scene.targets[t].position);
			if (d > max_range[t]) continue;
			double measured = d + noise.range_sigma_m * z;
			if (step > 0.0) measured = std::round(measured / step) * step;
			entries.emplace_back(std::max(measured, 0.0), t);
			detected[t] = true;
		}
		std::shuffle(entries.begin(), entries.end(), rng);

		DistanceProfile profile{bs.id, {}};
		std::vector<std::size_t> truth;
		for (const auto& [d, t] : entries)
		{
			profile.distances.push_back(d);
			truth.push_back(t);
		}
		out.profiles.push_back(std::move(profile));
		out.truth.push_back(std::move(truth));
		out.detected.push_back(std::move(detected));
	}
	return out;
}

const char* to_string(TrialStatus status)
{
	switch (status)
	{
	case TrialStatus::Complete: return "complete";
	case TrialStatus::Partial: return "partial";
	case TrialStatus::Infeasible: return "infeasible";
	}
	return "unknown";
}

Aggregates compute_aggregates(const std::vector<TrialRecord>& records)
{
	Aggregates agg;
	agg.trials = records.size();
	std::size_t recovered = 0, correct = 0, detected = 0, total = 0, errors = 0;
	double sq = 0.0;
	for (const auto& r : records)
	{
		detected += r.detected_pairs;
		total += r.total_pairs;
		if (r.status == TrialStatus::Partial)
		{
			++agg.partial;
			continue;
		}
		++agg.completed;
		if (r.status == TrialStatus::Infeasible) ++agg.infeasible;
		if (r.feasible_count > 1) ++agg.ghost_trials;
		if (r.truth_recovered) ++recovered;
		if (r.selected_correct) ++correct;
		for (double e : r.position_errors_m)
		{
			sq += e * e;
			++errors;
		}
	}
	auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
	agg.ghost_fraction = ratio(agg.ghost_trials, agg.completed);
	agg.truth_recovered_rate = ratio(recovered, agg.completed);
	agg.correct_rate = ratio(correct, agg.completed);
	agg.detection_fraction = ratio(detected, total);
	agg.rmse_m = errors == 0 ? 0.0 : std::sqrt(sq / static_cast<double>(errors));
	return agg;
}

namespace {

Scene trial_scene(const ExperimentSpec& spec, std::uint64_t trial_seed)
{
	if (const auto* scene = std::get_if<Scene>(&spec.scene)) return *scene;
	const auto& r = std::get<RandomSceneSpec>(spec.scene);
	return random_scene(r.num_bs, r.num_targets, r.bounds, r.rcs_dbsm, trial_seed);
}

std::vector<double> position_errors(const AssociationSolution& sol, const Measurements& m, const Scene& scene)
{
	std::vector<double> out;
	for (std::size_t k = 0; k < sol.estimates.size(); ++k)
		out.push_back(true_distance(sol.estimates[k].position, scene.targets[m.truth[0][k]].position));
	return out;
}

void check_spec(const ExperimentSpec& spec)
{
	if (spec.trials == 0) throw DomainError("experiment: trials must be at least 1");
	if (const auto* r = std::get_if<RandomSceneSpec>(&spec.scene); r && r->num_bs < 3)
		throw DomainError("experiment: at least 3 BSs required");
}

}

double level_feasibility_tol(const ExperimentSpec& spec, double sigma_m, std::size_t num_anchors)
{
	double variance = sigma_m * sigma_m;
	if (spec.noise.quantize_to_resolution)
	{
		const double step = range_resolution(spec.noise.bandwidth_hz);
		variance += step * step / 12.0;
	}
	if (variance == 0.0) return spec.feas_tol_m;
	return std::max(spec.feas_tol_m, noisy_feasibility_tol(std::sqrt(variance), num_anchors));
}

ExperimentReport run_uniqueness_experiment(const ExperimentSpec& spec)
{
	check_spec(spec);
	const LinkBudgetParams link(spec.link);
	ExperimentReport report;
	report.mode = "uniqueness";
	report.seed = spec.seed;
	report.trials = spec.trials;

	LevelReport level;
	level.sigma_m = 0.0;
	level.feas_tol_m = spec.feas_tol_m;
	level.records.resize(spec.trials);
	AssociationOptions options;
	options.feas_tol_m = spec.feas_tol_m;

	parallel_for(spec.trials, spec.threads, [&](std::size_t i) {
		TrialRecord& rec = level.records[i];
		rec.index = i;
		rec.seed = child_seed(spec.seed, i);
		const Scene scene = trial_scene(spec, rec.seed);
		const auto m = measure_distances(scene, link, spec.snr_min_db, NoiseModel{}, child_seed(rec.seed, 1));
		rec.detected_pairs = m.detected_pairs();
		rec.total_pairs = m.detected.size() * scene.targets.size();
		if (!m.full_detection() || scene.targets.empty())
		{
			rec.status = TrialStatus::Partial;
			return;
		}
		const auto bss = scene.active_bss();
		const auto feasible = enumerate_feasible(m.profiles, bss, options);
		rec.feasible_count = feasible.size();
		if (feasible.empty())
		{
			rec.status = TrialStatus::Infeasible;
			return;
		}
		const auto truth = m.truth_hypothesis();
		rec.truth_recovered = std::any_of(feasible.begin(), feasible.end(),
		                                  [&](const AssociationSolution& s) { return s.hypothesis == truth; });
		rec.selected_correct = feasible.front().hypothesis == truth;
		rec.position_errors_m = position_errors(feasible.front(), m, scene);
	});
	level.aggregates = compute_aggregates(level.records);
	report.levels.push_back(std::move(level));
	return report;
}

ExperimentReport run_accuracy_experiment(const ExperimentSpec& spec)
{
	check_spec(spec);
	if (spec.sigma_list.empty()) throw DomainError("accuracy experiment: empty sigma list");
	const LinkBudgetParams link(spec.link);
	ExperimentReport report;
	report.mode = "accuracy";
	report.seed = spec.seed;
	report.trials = spec.trials;

	for (double sigma : spec.sigma_list)
	{
		if (!(sigma >= 0.0)) throw DomainError("accuracy experiment: sigma must be nonnegative");
		LevelReport level;
		level.sigma_m = sigma;
		level.records.resize(spec.trials);
		NoiseModel noise = spec.noise;
		noise.range_sigma_m = sigma;

		std::vector<double> tols(spec.trials, spec.feas_tol_m);
		parallel_for(spec.trials, spec.threads, [&](std::size_t i) {
			TrialRecord& rec = level.records[i];
			rec.index = i;
			rec.seed = child_seed(spec.seed, i);
			const Scene scene = trial_scene(spec, rec.seed);
			const auto m = measure_distances(scene, link, spec.snr_min_db, noise, child_seed(rec.seed, 1));
			rec.detected_pairs = m.detected_pairs();
			rec.total_pairs = m.detected.size() * scene.targets.size();
			if (!m.full_detection() || scene.targets.empty())
			{
				rec.status = TrialStatus::Partial;
				return;
			}
			AssociationOptions options;
			options.feas_tol_m = level_feasibility_tol(spec, sigma, m.profiles.size());
			tols[i] = options.feas_tol_m;
			const auto bss = scene.active_bss();
			try
			{
				const auto sol = solve_association_bnb(m.profiles, bss, options);
				rec.feasible_count = 1;
				rec.truth_recovered = rec.selected_correct = sol.hypothesis == m.truth_hypothesis();
				rec.position_errors_m = position_errors(sol, m, scene);
			}
			catch (const InfeasibleError&)
			{
				rec.status = TrialStatus::Infeasible;
			}
		});
		level.feas_tol_m = *std::max_element(tols.begin(), tols.end());
		level.aggregates = compute_aggregates(level.records);
		report.levels.push_back(std::move(level));
	}
	return report;
}

}
