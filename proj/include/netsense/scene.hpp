#ifndef NETSENSE_SCENE_HPP
#define NETSENSE_SCENE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace netsense {

/// Planar position in meters.
struct Point2
{
	double x = 0.0;
	double y = 0.0;

	friend bool operator==(const Point2&, const Point2&) = default;
};

Point2 operator+(Point2 a, Point2 b);
Point2 operator-(Point2 a, Point2 b);
Point2 operator*(double s, Point2 p);
double dot(Point2 a, Point2 b);
double norm(Point2 p);
bool is_finite(Point2 p);

enum class AnchorKind
{
	ActiveBS,
	PassiveIRS,
};

struct Anchor
{
	std::string id;
	AnchorKind kind = AnchorKind::ActiveBS;
	Point2 position;

	friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct Target
{
	std::string id;
	Point2 position;
	double rcs_dbsm = -10.0;

	friend bool operator==(const Target&, const Target&) = default;
};

/// Axis-aligned rectangle, inclusive on all edges.
struct Bounds
{
	double xmin = 0.0;
	double ymin = 0.0;
	double xmax = 0.0;
	double ymax = 0.0;

	[[nodiscard]] bool contains(Point2 p) const;
	friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Scene
{
	std::vector<Anchor> anchors;
	std::vector<Target> targets;
	Bounds bounds;

	[[nodiscard]] std::vector<Anchor> active_bss() const;
	[[nodiscard]] std::vector<Anchor> irss() const;
	[[nodiscard]] const Anchor* find_anchor(const std::string& id) const;

	friend bool operator==(const Scene&, const Scene&) = default;
};

constexpr double kDefaultCollinearityTol = 1e-9;

/// Euclidean distance.
double true_distance(Point2 a, Point2 b);

/// Twice-normalised triangle area test used for every collinearity check in the library:
/// the triple is collinear when |area| < tol * (max pairwise distance)^2.
bool collinear(Point2 a, Point2 b, Point2 c, double tol = kDefaultCollinearityTol);

/// True when no triangle spanned by the points clears the collinearity tolerance.
bool all_collinear(std::span<const Point2> points, double tol = kDefaultCollinearityTol);

enum class ViolationKind
{
	NonFiniteCoordinate,
	DuplicateAnchorId,
	DuplicateTargetId,
	TargetOutOfBounds,
	TooFewActiveBs,
	CollinearBsTriple,
};

struct Violation
{
	ViolationKind kind;
	std::string detail;
};

struct ValidationReport
{
	std::vector<Violation> violations;

	[[nodiscard]] bool valid() const { return violations.empty(); }
	[[nodiscard]] bool has(ViolationKind kind) const;
};

struct ValidationOptions
{
	double collinearity_tol = kDefaultCollinearityTol;
	/// Trilateration experiments need three; the heterogeneous-anchor scenes run with two.
	std::size_t min_active_bs = 3;
};

ValidationReport validate_scene(const Scene& scene, const ValidationOptions& options = {});

/// Draws BSs and targets uniformly over `bounds`. BS sets are redrawn until no active-BS
/// triple is collinear; throws GenerationError after `max_rejections` failed draws.
Scene random_scene(std::size_t num_bs, std::size_t num_targets, const Bounds& bounds, double rcs_dbsm,
                   std::uint64_t seed, std::size_t max_rejections = 1000);

const char* to_string(AnchorKind kind);
const char* to_string(ViolationKind kind);

nlohmann::json to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}

#endif
