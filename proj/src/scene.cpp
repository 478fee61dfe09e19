#include "netsense/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "netsense/errors.hpp"
#include "netsense/random.hpp"

namespace netsense {

Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double norm(Point2 p) { return std::hypot(p.x, p.y); }
bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool Bounds::contains(Point2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }

std::vector<Anchor> Scene::active_bss() const
{
	std::vector<Anchor> out;
	std::copy_if(anchors.begin(), anchors.end(), std::back_inserter(out),
	             [](const Anchor& a) { return a.kind == AnchorKind::ActiveBS; });
	return out;
}

std::vector<Anchor> Scene::irss() const
{
	std::vector<Anchor> out;
	std::copy_if(anchors.begin(), anchors.end(), std::back_inserter(out),
	             [](const Anchor& a) { return a.kind == AnchorKind::PassiveIRS; });
	return out;
}

const Anchor* Scene::find_anchor(const std::string& id) const
{
	auto it = std::find_if(anchors.begin(), anchors.end(), [&](const Anchor& a) { return a.id == id; });
	return it == anchors.end() ? nullptr : &*it;
}

double true_distance(Point2 a, Point2 b) { return norm(a - b); }

bool collinear(Point2 a, Point2 b, Point2 c, double tol)
{
	const Point2 ab = b - a;
	const Point2 ac = c - a;
	const double area = 0.5 * std::abs(ab.x * ac.y - ab.y * ac.x);
	const double scale = std::max({true_distance(a, b), true_distance(a, c), true_distance(b, c)});
	return area < tol * scale * scale || scale == 0.0;
}

bool all_collinear(std::span<const Point2> points, double tol)
{
	for (std::size_t i = 0; i < points.size(); ++i)
		for (std::size_t j = i + 1; j < points.size(); ++j)
			for (std::size_t k = j + 1; k < points.size(); ++k)
				if (!collinear(points[i], points[j], points[k], tol)) return false;
	return true;
}

bool ValidationReport::has(ViolationKind kind) const
{
	return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_scene(const Scene& scene, const ValidationOptions& options)
{
	ValidationReport report;
	auto add = [&](ViolationKind kind, std::string detail) { report.violations.push_back({kind, std::move(detail)}); };

	std::set<std::string> seen;
	for (const auto& a : scene.anchors)
	{
		if (!seen.insert(a.id).second) add(ViolationKind::DuplicateAnchorId, a.id);
		if (!is_finite(a.position)) add(ViolationKind::NonFiniteCoordinate, "anchor " + a.id);
	}
	seen.clear();
	for (const auto& t : scene.targets)
	{
		if (!seen.insert(t.id).second) add(ViolationKind::DuplicateTargetId, t.id);
		if (!is_finite(t.position))
			add(ViolationKind::NonFiniteCoordinate, "target " + t.id);
		else if (!scene.bounds.contains(t.position))
			add(ViolationKind::TargetOutOfBounds, t.id);
	}

	const auto bss = scene.active_bss();
	if (bss.size() < options.min_active_bs)
		add(ViolationKind::TooFewActiveBs,
		    std::to_string(bss.size()) + " < " + std::to_string(options.min_active_bs));
	for (std::size_t i = 0; i < bss.size(); ++i)
		for (std::size_t j = i + 1; j < bss.size(); ++j)
			for (std::size_t k = j + 1; k < bss.size(); ++k)
				if (collinear(bss[i].position, bss[j].position, bss[k].position, options.collinearity_tol))
					add(ViolationKind::CollinearBsTriple, bss[i].id + "," + bss[j].id + "," + bss[k].id);
	return report;
}

Scene random_scene(std::size_t num_bs, std::size_t num_targets, const Bounds& bounds, double rcs_dbsm,
                   std::uint64_t seed, std::size_t max_rejections)
{
	if (num_bs < 3) throw DomainError("random_scene: num_bs must be at least 3");
	if (!(bounds.xmax > bounds.xmin && bounds.ymax > bounds.ymin))
		throw DomainError("random_scene: bounds must have positive extent");

	Rng rng = make_rng(seed);
	std::uniform_real_distribution<double> ux(bounds.xmin, bounds.xmax);
	std::uniform_real_distribution<double> uy(bounds.ymin, bounds.ymax);
	auto draw = [&]() { return Point2{ux(rng), uy(rng)}; };

	Scene scene;
	scene.bounds = bounds;
	std::vector<Point2> positions(num_bs);
	std::size_t attempts = 0;
	for (;;)
	{
		for (auto& p : positions) p = draw();
		bool ok = true;
		for (std::size_t i = 0; ok && i < num_bs; ++i)
			for (std::size_t j = i + 1; ok && j < num_bs; ++j)
				for (std::size_t k = j + 1; ok && k < num_bs; ++k)
					ok = !collinear(positions[i], positions[j], positions[k]);
		if (ok) break;
		if (++attempts >= max_rejections)
			throw GenerationError("random_scene: rejection limit exceeded drawing non-collinear BSs");
	}
	for (std::size_t i = 0; i < num_bs; ++i)
		scene.anchors.push_back({"bs" + std::to_string(i + 1), AnchorKind::ActiveBS, positions[i]});
	for (std::size_t i = 0; i < num_targets; ++i)
		scene.targets.push_back({"t" + std::to_string(i + 1), draw(), rcs_dbsm});
	return scene;
}

const char* to_string(AnchorKind kind) { return kind == AnchorKind::ActiveBS ? "bs" : "irs"; }

const char* to_string(ViolationKind kind)
{
	switch (kind)
	{
	case ViolationKind::NonFiniteCoordinate: return "non_finite_coordinate";
	case ViolationKind::DuplicateAnchorId: return "duplicate_anchor_id";
	case ViolationKind::DuplicateTargetId: return "duplicate_target_id";
	case ViolationKind::TargetOutOfBounds: return "target_out_of_bounds";
	case ViolationKind::TooFewActiveBs: return "too_few_active_bs";
	case ViolationKind::CollinearBsTriple: return "collinear_bs_triple";
	}
	return "unknown";
}

nlohmann::json to_json(const Scene& scene)
{
	nlohmann::json j;
	j["bounds"] = {scene.bounds.xmin, scene.bounds.ymin, scene.bounds.xmax, scene.bounds.ymax};
	j["anchors"] = nlohmann::json::array();
	for (const auto& a : scene.anchors)
		j["anchors"].push_back({{"id", a.id}, {"kind", to_string(a.kind)}, {"x", a.position.x}, {"y", a.position.y}});
	j["targets"] = nlohmann::json::array();
	for (const auto& t : scene.targets)
		j["targets"].push_back({{"id", t.id}, {"x", t.position.x}, {"y", t.position.y}, {"rcs_dbsm", t.rcs_dbsm}});
	return j;
}

Scene scene_from_json(const nlohmann::json& j)
{
	try
	{
		Scene scene;
		const auto& b = j.at("bounds");
		if (!b.is_array() || b.size() != 4) throw IoError("scene: bounds must be [xmin, ymin, xmax, ymax]");
		scene.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
		for (const auto& a : j.at("anchors"))
		{
			const auto kind = a.at("kind").get<std::string>();
			if (kind != "bs" && kind != "irs") throw IoError("scene: anchor kind must be \"bs\" or \"irs\"");
			scene.anchors.push_back({a.at("id").get<std::string>(),
			                         kind == "bs" ? AnchorKind::ActiveBS : AnchorKind::PassiveIRS,
			                         {a.at("x").get<double>(), a.at("y").get<double>()}});
		}
		if (j.contains("targets"))
			for (const auto& t : j.at("targets"))
				scene.targets.push_back({t.at("id").get<std::string>(),
				                         {t.at("x").get<double>(), t.at("y").get<double>()},
				                         t.value("rcs_dbsm", -10.0)});
		return scene;
	}
	catch (const nlohmann::json::exception& e)
	{
		throw IoError(std::string("scene: malformed JSON: ") + e.what());
	}
}

Scene load_scene(const std::string& path)
{
	std::ifstream in(path);
	if (!in) throw IoError("cannot open scene file " + path);
	nlohmann::json j;
	try
	{
		in >> j;
	}
	catch (const nlohmann::json::exception& e)
	{
		throw IoError("scene file " + path + ": " + e.what());
	}
	return scene_from_json(j);
}

void save_scene(const Scene& scene, const std::string& path)
{
	std::ofstream out(path);
	if (!out) throw IoError("cannot write scene file " + path);
	out << to_json(scene).dump(2) << '\n';
}

}
