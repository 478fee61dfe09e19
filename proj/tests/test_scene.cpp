#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "netsense/errors.hpp"
#include "netsense/random.hpp"
#include "netsense/scene.hpp"

using namespace netsense;

namespace {

Scene example1()
{
	Scene s;
	s.bounds = {-10, -10, 10, 10};
	s.anchors = {{"bs1", AnchorKind::ActiveBS, {-3.5, 0}}, {"bs2", AnchorKind::ActiveBS, {5, 0}},
	             {"bs3", AnchorKind::ActiveBS, {0, -4.5}}};
	s.targets = {{"t1", {3, 3}, -10}, {"t2", {-3, -3}, -10}};
	return s;
}

}

TEST_CASE("true_distance matches worked distances")
{
	CHECK(true_distance({0, 0}, {0, 0}) == 0.0);
	CHECK(true_distance({-3.5, 0}, {3, 3}) == doctest::Approx(std::sqrt(51.25)).epsilon(1e-15));
	CHECK(true_distance({5, 0}, {-3, -3}) == doctest::Approx(std::sqrt(73.0)).epsilon(1e-15));
}

TEST_CASE("true_distance is symmetric and obeys the triangle inequality")
{
	Rng rng = make_rng(11);
	std::uniform_real_distribution<double> u(-500, 500);
	for (int i = 0; i < 1000; ++i)
	{
		const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
		CHECK(true_distance(a, b) == true_distance(b, a));
		CHECK(true_distance(a, c) <= true_distance(a, b) + true_distance(b, c) + 1e-12);
	}
}

TEST_CASE("validate_scene")
{
	SUBCASE("example BS layout is valid") { CHECK(validate_scene(example1()).valid()); }

	SUBCASE("collinear BSs")
	{
		Scene s = example1();
		s.anchors = {{"a", AnchorKind::ActiveBS, {0, 0}}, {"b", AnchorKind::ActiveBS, {1, 0}},
		             {"c", AnchorKind::ActiveBS, {2, 0}}};
		const auto r = validate_scene(s);
		CHECK(r.has(ViolationKind::CollinearBsTriple));
	}

	SUBCASE("duplicate target id")
	{
		Scene s = example1();
		s.targets[1].id = "t1";
		const auto r = validate_scene(s);
		CHECK(r.has(ViolationKind::DuplicateTargetId));
		CHECK(r.violations.size() == 1);
	}

	SUBCASE("duplicate anchor id, out of bounds and too few BSs")
	{
		Scene s = example1();
		s.anchors[1].id = "bs1";
		s.targets[0].position = {30, 0};
		s.anchors.pop_back();
		const auto r = validate_scene(s);
		CHECK(r.has(ViolationKind::DuplicateAnchorId));
		CHECK(r.has(ViolationKind::TargetOutOfBounds));
		CHECK(r.has(ViolationKind::TooFewActiveBs));
	}

	SUBCASE("non-finite coordinates")
	{
		Scene s = example1();
		s.targets[0].position.x = std::nan("");
		CHECK(validate_scene(s).has(ViolationKind::NonFiniteCoordinate));
	}

	SUBCASE("IRS anchors are not part of the collinearity check")
	{
		Scene s = example1();
		s.anchors.push_back({"irs", AnchorKind::PassiveIRS, {-3.5 + 8.5 * 2, 0}});
		CHECK(validate_scene(s).valid());
	}
}

TEST_CASE("random_scene")
{
	const Bounds bounds{0, 0, 300, 300};

	SUBCASE("deterministic given the seed")
	{
		CHECK(random_scene(4, 3, bounds, -10, 99) == random_scene(4, 3, bounds, -10, 99));
		CHECK_FALSE(random_scene(4, 3, bounds, -10, 99) == random_scene(4, 3, bounds, -10, 100));
	}

	SUBCASE("no targets")
	{
		const auto s = random_scene(3, 0, bounds, -10, 1);
		CHECK(s.targets.empty());
		CHECK(s.anchors.size() == 3);
	}

	SUBCASE("1000 draws validate cleanly")
	{
		int violations = 0;
		for (std::uint64_t seed = 0; seed < 1000; ++seed)
			violations += static_cast<int>(validate_scene(random_scene(3, 2, bounds, -10, seed)).violations.size());
		CHECK(violations == 0);
	}

	SUBCASE("preconditions")
	{
		CHECK_THROWS_AS(random_scene(2, 1, bounds, -10, 1), DomainError);
		// A degenerate rectangle makes every BS triple collinear.
		CHECK_THROWS_AS(random_scene(3, 1, Bounds{0, 0, 300, 1e-300}, -10, 1, 5), GenerationError);
	}
}

TEST_CASE("scene JSON round-trips bit-exactly")
{
	for (std::uint64_t seed = 0; seed < 20; ++seed)
	{
		Scene s = random_scene(5, 4, {-123.456, 0, 789.1, 1000}, -7.25, seed);
		s.anchors.push_back({"irs1", AnchorKind::PassiveIRS, {1.0 / 3.0, 2.0 / 7.0}});
		const Scene back = scene_from_json(nlohmann::json::parse(to_json(s).dump()));
		CHECK(back == s);
	}

	const auto path = std::filesystem::temp_directory_path() / "netsense_scene_roundtrip.json";
	save_scene(example1(), path.string());
	CHECK(load_scene(path.string()) == example1());
	std::filesystem::remove(path);
}

TEST_CASE("malformed scene files are I/O errors")
{
	CHECK_THROWS_AS(scene_from_json(nlohmann::json::parse(R"({"bounds": [0, 0, 1]})")), IoError);
	CHECK_THROWS_AS(scene_from_json(nlohmann::json::parse(
	                    R"({"bounds": [0, 0, 1, 1], "anchors": [{"id": "a", "kind": "tower", "x": 0, "y": 0}]})")),
	                IoError);
	CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), IoError);
}

TEST_CASE("shipped scenes validate")
{
	CHECK(validate_scene(load_scene(NETSENSE_DATA_DIR "/scenes/example1.json")).valid());
	CHECK(validate_scene(load_scene(NETSENSE_DATA_DIR "/scenes/example2.json")).valid());
	ValidationOptions two_bs;
	two_bs.min_active_bs = 2;
	CHECK(validate_scene(load_scene(NETSENSE_DATA_DIR "/scenes/irs_example.json"), two_bs).valid());
}
