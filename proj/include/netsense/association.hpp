#ifndef NETSENSE_ASSOCIATION_HPP
#define NETSENSE_ASSOCIATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netsense/localization.hpp"
#include "netsense/scene.hpp"

namespace netsense {

/// Unordered ranges one anchor extracted, one per detected target.
struct DistanceProfile
{
	std::string anchor_id;
	std::vector<double> distances;
};

/// perms[m][k] is the index into anchor m's distances used for target slot k. Anchor 0 is
/// always the identity, so slot k is "the target anchor 0 measured at distances[k]".
struct AssociationHypothesis
{
	std::vector<std::vector<std::size_t>> perms;

	friend bool operator==(const AssociationHypothesis&, const AssociationHypothesis&) = default;
};

/// Lexicographic order over perms[1], perms[2], ... concatenated.
bool lex_less(const AssociationHypothesis& a, const AssociationHypothesis& b);

struct AssociationSolution
{
	AssociationHypothesis hypothesis;
	std::vector<PositionEstimate> estimates;
	double max_residual_m = 0.0;
};

/// Residuals are compared on a 1 nm grid so that round-off alone never decides between two
/// exact solutions; equal keys fall back to lex_less.
constexpr double kResidualTieResolution = 1e-9;
long long residual_key(double residual_m);
bool solution_less(const AssociationSolution& a, const AssociationSolution& b);

constexpr double kExactFeasibilityTol = 1e-4;

/// Tolerance for noisy ranges with standard deviation sigma seen by num_anchors anchors.
double noisy_feasibility_tol(double sigma_m, std::size_t num_anchors);

struct AssociationOptions
{
	double feas_tol_m = kExactFeasibilityTol;
	TrilaterationOptions trilateration{};
};

struct EnumerationStats
{
	std::uint64_t hypotheses_examined = 0;
	/// Smallest max-residual over every hypothesis, feasible or not.
	double best_max_residual_m = 0.0;
};

/// Exhaustive search: every (K!)^(M-1) permutation tuple is trilaterated target by target and
/// kept when each target's rms residual is within feas_tol_m. Sorted best first.
/// Profiles are matched to anchors by id; profile order defines anchor order.
std::vector<AssociationSolution> enumerate_feasible(std::span<const DistanceProfile> profiles,
                                                    std::span<const Anchor> anchors,
                                                    const AssociationOptions& options = {},
                                                    EnumerationStats* stats = nullptr);

/// Best feasible solution of the exhaustive search. Throws InfeasibleError when none exists.
AssociationSolution solve_association(std::span<const DistanceProfile> profiles, std::span<const Anchor> anchors,
                                      const AssociationOptions& options = {});

/// Same contract as solve_association, found by branch and bound: target slots are filled one
/// at a time, anchor-1 distances are only paired with anchor-0 distances whose circles
/// (nearly) meet, further anchors only contribute distances consistent with those
/// intersection points, and partial solutions whose max residual already exceeds the
/// incumbent are cut.
AssociationSolution solve_association_bnb(std::span<const DistanceProfile> profiles, std::span<const Anchor> anchors,
                                          const AssociationOptions& options = {});

struct GhostReport
{
	std::vector<AssociationSolution> feasible_solutions;
	bool unique = false;
	std::vector<Point2> ghost_positions;
};

/// Ghosts are estimated positions farther than match_radius_m from every ground-truth target.
GhostReport make_ghost_report(std::vector<AssociationSolution> solutions,
                              std::optional<std::span<const Point2>> truth = std::nullopt,
                              double match_radius_m = 1e-3);

/// Noise-free profiles for every active BS in the scene, in target order.
std::vector<DistanceProfile> exact_profiles(const Scene& scene);

struct GhostTrial
{
	std::size_t index = 0;
	std::uint64_t seed = 0;
	std::size_t feasible_count = 0;
};

struct GhostProbability
{
	double fraction = 0.0;
	std::size_t trials = 0;
	std::size_t ghost_trials = 0;
	std::size_t infeasible_trials = 0;
	std::vector<std::uint64_t> offending_seeds;
	std::vector<GhostTrial> log;
};

using SceneFactory = std::function<Scene(std::uint64_t seed)>;

/// Fraction of trials whose exact-range problem has more than one feasible association.
/// Trial i uses child_seed(seed, i); the result does not depend on `threads`.
GhostProbability ghost_probability(std::size_t num_trials, const SceneFactory& make_scene, double feas_tol_m,
                                   std::uint64_t seed, std::size_t threads = 0);

GhostProbability ghost_probability(std::size_t num_trials, std::size_t num_bs, std::size_t num_targets,
                                   const Bounds& bounds, double feas_tol_m, std::uint64_t seed,
                                   std::size_t threads = 0);

}

#endif
