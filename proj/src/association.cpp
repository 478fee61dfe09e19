#include "netsense/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "netsense/errors.hpp"
#include "netsense/parallel.hpp"
#include "netsense/random.hpp"

namespace netsense {

bool lex_less(const AssociationHypothesis& a, const AssociationHypothesis& b)
{
	const std::size_t m = std::min(a.perms.size(), b.perms.size());
	for (std::size_t i = 1; i < m; ++i)
	{
		if (a.perms[i] != b.perms[i])
			return std::lexicographical_compare(a.perms[i].begin(), a.perms[i].end(), b.perms[i].begin(),
			                                    b.perms[i].end());
	}
	return a.perms.size() < b.perms.size();
}

long long residual_key(double residual_m) { return std::llround(residual_m / kResidualTieResolution); }

bool solution_less(const AssociationSolution& a, const AssociationSolution& b)
{
	const auto ka = residual_key(a.max_residual_m);
	const auto kb = residual_key(b.max_residual_m);
	if (ka != kb) return ka < kb;
	return lex_less(a.hypothesis, b.hypothesis);
}

double noisy_feasibility_tol(double sigma_m, std::size_t num_anchors)
{
	return 3.0 * sigma_m * std::sqrt(static_cast<double>(num_anchors));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Problem
{
	std::vector<Point2> centers;
	std::vector<std::vector<double>> distances;  // [anchor][entry]
	std::size_t num_anchors = 0;
	std::size_t num_targets = 0;
	AssociationOptions options;

	[[nodiscard]] PositionEstimate evaluate(std::span<const std::size_t> tuple) const
	{
		std::vector<double> d(num_anchors);
		for (std::size_t m = 0; m < num_anchors; ++m) d[m] = distances[m][tuple[m]];
		return trilaterate(centers, d, options.trilateration);
	}
};

Problem prepare(std::span<const DistanceProfile> profiles, std::span<const Anchor> anchors,
                const AssociationOptions& options)
{
	if (profiles.empty()) throw DomainError("association: no distance profiles");
	if (profiles.size() < 3) throw GeometryError("association: at least 3 anchors required");
	if (!(options.feas_tol_m >= 0.0)) throw DomainError("association: feasibility tolerance must be nonnegative");

	Problem p;
	p.options = options;
	p.num_anchors = profiles.size();
	p.num_targets = profiles.front().distances.size();
	if (p.num_targets == 0) throw DomainError("association: empty distance profile");
	for (const auto& profile : profiles)
	{
		auto it = std::find_if(anchors.begin(), anchors.end(), [&](const Anchor& a) { return a.id == profile.anchor_id; });
		if (it == anchors.end()) throw DomainError("association: no anchor with id " + profile.anchor_id);
		if (profile.distances.size() != p.num_targets)
			throw NotSupportedError("association: profiles differ in cardinality (partial detection)");
		for (double d : profile.distances)
			if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("association: distances must be finite and nonnegative");
		p.centers.push_back(it->position);
		p.distances.push_back(profile.distances);
	}
	if (all_collinear(p.centers, options.trilateration.collinearity_tol))
		throw GeometryError("association: anchors are collinear");
	return p;
}

// Per-target trilateration results keyed by the (anchor -> entry) tuple.
class TupleCache
{
public:
	explicit TupleCache(const Problem& p) : problem_(p)
	{
		std::size_t size = 1;
		for (std::size_t m = 0; m < p.num_anchors; ++m)
		{
			if (size > (std::size_t{1} << 24) / p.num_targets)
				throw NotSupportedError("association: problem too large for exhaustive enumeration");
			size *= p.num_targets;
		}
		slots_.resize(size);
	}

	const PositionEstimate& get(std::span<const std::size_t> tuple)
	{
		std::size_t index = 0;
		for (std::size_t m = tuple.size(); m-- > 0;) index = index * problem_.num_targets + tuple[m];
		auto& slot = slots_[index];
		if (!slot) slot = problem_.evaluate(tuple);
		return *slot;
	}

private:
	const Problem& problem_;
	std::vector<std::optional<PositionEstimate>> slots_;
};

std::vector<AssociationSolution> enumerate(const Problem& p, EnumerationStats& stats)
{
	const std::size_t m_count = p.num_anchors;
	const std::size_t k_count = p.num_targets;
	AssociationHypothesis h;
	h.perms.assign(m_count, std::vector<std::size_t>(k_count));
	for (auto& perm : h.perms) std::iota(perm.begin(), perm.end(), 0);

	TupleCache cache(p);
	std::vector<std::size_t> tuple(m_count);
	std::vector<AssociationSolution> feasible;
	stats = {};
	stats.best_max_residual_m = kInf;
	for (;;)
	{
		++stats.hypotheses_examined;
		AssociationSolution sol;
		bool ok = true;
		for (std::size_t k = 0; k < k_count; ++k)
		{
			for (std::size_t m = 0; m < m_count; ++m) tuple[m] = h.perms[m][k];
			const auto& est = cache.get(tuple);
			sol.max_residual_m = std::max(sol.max_residual_m, est.residual_rms_m);
			ok = ok && est.residual_rms_m <= p.options.feas_tol_m;
			sol.estimates.push_back(est);
		}
		stats.best_max_residual_m = std::min(stats.best_max_residual_m, sol.max_residual_m);
		if (ok)
		{
			sol.hypothesis = h;
			feasible.push_back(std::move(sol));
		}

		// Odometer over anchors 1..M-1, last anchor fastest: lexicographic hypothesis order.
		std::size_t m = m_count;
		while (--m > 0)
			if (std::next_permutation(h.perms[m].begin(), h.perms[m].end())) break;
		if (m == 0) break;
	}
	std::stable_sort(feasible.begin(), feasible.end(), solution_less);
	return feasible;
}

class BranchAndBound
{
public:
	explicit BranchAndBound(const Problem& p) : p_(p), cache_(p)
	{
		const std::size_t k_count = p.num_targets;
		const std::size_t m_count = p.num_anchors;
		// Any single misfit of a feasible target is bounded by sqrt(M) * tol.
		const double bound = std::sqrt(static_cast<double>(m_count)) * p.options.feas_tol_m;

		pair_ok_.assign(k_count, std::vector<bool>(k_count, false));
		compat_.assign(m_count, std::vector<std::vector<std::vector<bool>>>(
		                            k_count, std::vector<std::vector<bool>>(k_count, std::vector<bool>(k_count, false))));
		for (std::size_t k = 0; k < k_count; ++k)
			for (std::size_t j = 0; j < k_count; ++j)
			{
				const auto candidates = seed_candidates(p.distances[0][k], p.distances[1][j], bound);
				if (candidates.empty()) continue;
				pair_ok_[k][j] = true;
				for (std::size_t m = 2; m < m_count; ++m)
					for (std::size_t l = 0; l < k_count; ++l)
						compat_[m][k][j][l] = std::any_of(candidates.begin(), candidates.end(), [&](const Candidate& c) {
							return std::abs(true_distance(c.point, p.centers[m]) - p.distances[m][l]) <= c.gate;
						});
			}

		used_.assign(m_count, std::vector<bool>(k_count, false));
		assign_.assign(m_count, std::vector<std::size_t>(k_count, 0));
		estimates_.resize(k_count);
		tuple_.resize(m_count);
	}

	std::optional<AssociationSolution> run()
	{
		fill_slot(0, 0.0);
		return incumbent_;
	}

	[[nodiscard]] double best_found() const { return best_found_; }

private:
	struct Candidate
	{
		Point2 point;
		double gate;
	};

	// Intersections of the anchor-0 and anchor-1 circles, each with the largest misfit a
	// feasible target near it could show at a third anchor (to first order in the residuals).
	std::vector<Candidate> seed_candidates(double r0, double r1, double bound) const
	{
		const Point2 c0 = p_.centers[0];
		const Point2 c1 = p_.centers[1];
		const double d = true_distance(c0, c1);
		const auto points = circle_intersections(c0, r0, c1, r1);
		std::vector<Candidate> out;
		if (points.empty())
		{
			// Any point's misfits on two circles separated by `gap` sum to at least `gap`.
			const double gap = d > r0 + r1 ? d - (r0 + r1) : std::abs(r0 - r1) - d;
			if (gap > 2.0 * bound) return out;
			const Point2 toward = (1.0 / d) * (c1 - c0);
			out.push_back({c0 + (d > r0 + r1 ? r0 : (r0 >= r1 ? r0 : -r0)) * toward, kInf});
			return out;
		}
		for (const auto& pt : points)
		{
			const double n0 = true_distance(pt, c0);
			const double n1 = true_distance(pt, c1);
			double gate = kInf;
			if (n0 > 0.0 && n1 > 0.0)
			{
				const double cosine = dot(pt - c0, pt - c1) / (n0 * n1);
				const double sigma_min = std::sqrt(std::max(0.0, 1.0 - std::abs(cosine)));
				if (sigma_min > 1e-6) gate = bound * (1.0 + 2.0 / sigma_min) + 1e-12 * std::max({r0, r1, d});
			}
			out.push_back({pt, gate});
		}
		return out;
	}

	void fill_slot(std::size_t k, double partial_max)
	{
		if (k == p_.num_targets)
		{
			leaf(partial_max);
			return;
		}
		for (std::size_t j = 0; j < p_.num_targets; ++j)
		{
			if (used_[1][j] || !pair_ok_[k][j]) continue;
			used_[1][j] = true;
			assign_[1][k] = j;
			choose(k, 2, partial_max);
			used_[1][j] = false;
		}
	}

	void choose(std::size_t k, std::size_t m, double partial_max)
	{
		if (m == p_.num_anchors)
		{
			tuple_[0] = k;
			for (std::size_t a = 1; a < p_.num_anchors; ++a) tuple_[a] = assign_[a][k];
			const auto& est = cache_.get(tuple_);
			best_found_ = std::min(best_found_, est.residual_rms_m);
			if (est.residual_rms_m > p_.options.feas_tol_m) return;
			const double next_max = std::max(partial_max, est.residual_rms_m);
			if (incumbent_ && residual_key(next_max) > residual_key(incumbent_->max_residual_m)) return;
			estimates_[k] = est;
			fill_slot(k + 1, next_max);
			return;
		}
		const std::size_t j = assign_[1][k];
		for (std::size_t l = 0; l < p_.num_targets; ++l)
		{
			if (used_[m][l] || !compat_[m][k][j][l]) continue;
			used_[m][l] = true;
			assign_[m][k] = l;
			choose(k, m + 1, partial_max);
			used_[m][l] = false;
		}
	}

	void leaf(double max_residual)
	{
		AssociationSolution sol;
		sol.hypothesis.perms = assign_;
		std::iota(sol.hypothesis.perms[0].begin(), sol.hypothesis.perms[0].end(), 0);
		sol.estimates = estimates_;
		sol.max_residual_m = max_residual;
		if (!incumbent_ || solution_less(sol, *incumbent_)) incumbent_ = std::move(sol);
	}

	const Problem& p_;
	TupleCache cache_;
	std::vector<std::vector<bool>> pair_ok_;                          // [k][j]
	std::vector<std::vector<std::vector<std::vector<bool>>>> compat_;  // [m][k][j][l]
	std::vector<std::vector<bool>> used_;
	std::vector<std::vector<std::size_t>> assign_;
	std::vector<PositionEstimate> estimates_;
	std::vector<std::size_t> tuple_;
	std::optional<AssociationSolution> incumbent_;
	double best_found_ = kInf;
};

}

std::vector<AssociationSolution> enumerate_feasible(std::span<const DistanceProfile> profiles,
                                                    std::span<const Anchor> anchors, const AssociationOptions& options,
                                                    EnumerationStats* stats)
{
	const Problem p = prepare(profiles, anchors, options);
	EnumerationStats local;
	auto out = enumerate(p, local);
	if (stats) *stats = local;
	return out;
}

AssociationSolution solve_association(std::span<const DistanceProfile> profiles, std::span<const Anchor> anchors,
                                      const AssociationOptions& options)
{
	EnumerationStats stats;
	auto feasible = enumerate_feasible(profiles, anchors, options, &stats);
	if (feasible.empty())
		throw InfeasibleError("association: no feasible solution (best max residual " +
		                          std::to_string(stats.best_max_residual_m) + " m)",
		                      stats.best_max_residual_m);
	return std::move(feasible.front());
}

AssociationSolution solve_association_bnb(std::span<const DistanceProfile> profiles, std::span<const Anchor> anchors,
                                          const AssociationOptions& options)
{
	const Problem p = prepare(profiles, anchors, options);
	BranchAndBound search(p);
	auto best = search.run();
	if (!best)
		throw InfeasibleError("association: no feasible solution (best target residual " +
		                          std::to_string(search.best_found()) + " m)",
		                      search.best_found());
	return std::move(*best);
}

GhostReport make_ghost_report(std::vector<AssociationSolution> solutions, std::optional<std::span<const Point2>> truth,
                              double match_radius_m)
{
	GhostReport report;
	report.unique = solutions.size() == 1;
	if (truth)
	{
		for (const auto& sol : solutions)
			for (const auto& est : sol.estimates)
			{
				double nearest = kInf;
				for (const auto& t : *truth) nearest = std::min(nearest, true_distance(est.position, t));
				const bool seen = std::any_of(report.ghost_positions.begin(), report.ghost_positions.end(),
				                              [&](Point2 g) { return true_distance(g, est.position) <= match_radius_m; });
				if (nearest > match_radius_m && !seen) report.ghost_positions.push_back(est.position);
			}
	}
	report.feasible_solutions = std::move(solutions);
	return report;
}

std::vector<DistanceProfile> exact_profiles(const Scene& scene)
{
	std::vector<DistanceProfile> out;
	for (const auto& a : scene.anchors)
	{
		if (a.kind != AnchorKind::ActiveBS) continue;
		DistanceProfile profile{a.id, {}};
		for (const auto& t : scene.targets) profile.distances.push_back(true_distance(a.position, t.position));
		out.push_back(std::move(profile));
	}
	return out;
}

GhostProbability ghost_probability(std::size_t num_trials, const SceneFactory& make_scene, double feas_tol_m,
                                   std::uint64_t seed, std::size_t threads)
{
	if (num_trials == 0) throw DomainError("ghost_probability: num_trials must be at least 1");
	GhostProbability result;
	result.trials = num_trials;
	result.log.resize(num_trials);
	AssociationOptions options;
	options.feas_tol_m = feas_tol_m;
	parallel_for(num_trials, threads, [&](std::size_t i) {
		GhostTrial& trial = result.log[i];
		trial.index = i;
		trial.seed = child_seed(seed, i);
		const Scene scene = make_scene(trial.seed);
		const auto profiles = exact_profiles(scene);
		const auto bss = scene.active_bss();
		trial.feasible_count = enumerate_feasible(profiles, bss, options).size();
	});
	for (const auto& trial : result.log)
	{
		if (trial.feasible_count == 0) ++result.infeasible_trials;
		if (trial.feasible_count > 1)
		{
			++result.ghost_trials;
			result.offending_seeds.push_back(trial.seed);
		}
	}
	result.fraction = static_cast<double>(result.ghost_trials) / static_cast<double>(num_trials);
	return result;
}

GhostProbability ghost_probability(std::size_t num_trials, std::size_t num_bs, std::size_t num_targets,
                                   const Bounds& bounds, double feas_tol_m, std::uint64_t seed, std::size_t threads)
{
	if (num_bs < 3) throw DomainError("ghost_probability: num_bs must be at least 3");
	return ghost_probability(
		num_trials, [&](std::uint64_t s) { return random_scene(num_bs, num_targets, bounds, -10.0, s); }, feas_tol_m,
		seed, threads);
}

}
