#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "netsense/errors.hpp"
#include "netsense/sim_harness.hpp"
#include "oracles.hpp"

using namespace netsense;

namespace {

Scene example_scene(Point2 t1)
{
	Scene s;
	s.bounds = {-10, -10, 10, 10};
	s.anchors = {{"bs1", AnchorKind::ActiveBS, {-3.5, 0}},
	             {"bs2", AnchorKind::ActiveBS, {5, 0}},
	             {"bs3", AnchorKind::ActiveBS, {0, -4.5}}};
	s.targets = {{"t1", t1, -10}, {"t2", {-3, -3}, -10}};
	return s;
}

}

TEST_CASE("measure_distances")
{
	const auto scene = example_scene({3, 3});
	const auto link = LinkBudgetParams::pedestrian();

	SUBCASE("zero noise gives the true distances, shuffled")
	{
		const auto m = measure_distances(scene, link, 10.0, {}, 42);
		REQUIRE(m.full_detection());
		CHECK(m.detected_pairs() == 6);
		for (std::size_t b = 0; b < m.profiles.size(); ++b)
			for (std::size_t e = 0; e < m.profiles[b].distances.size(); ++e)
				CHECK(m.profiles[b].distances[e] ==
				      oracle::distance(scene.anchors[b].position, scene.targets[m.truth[b][e]].position));
		bool any_shuffled = false;
		for (std::uint64_t seed = 0; seed < 20 && !any_shuffled; ++seed)
		{
			const auto s = measure_distances(scene, link, 10.0, {}, seed);
			for (const auto& t : s.truth) any_shuffled |= !std::is_sorted(t.begin(), t.end());
		}
		CHECK(any_shuffled);
	}

	SUBCASE("quantised ranges sit on the resolution grid")
	{
		NoiseModel noise;
		noise.range_sigma_m = 0.3;
		noise.quantize_to_resolution = true;
		const double step = range_resolution(noise.bandwidth_hz);
		CHECK(step == doctest::Approx(0.1875).epsilon(1e-3));
		const auto m = measure_distances(scene, link, 10.0, noise, 7);
		for (const auto& p : m.profiles)
			for (double d : p.distances)
			{
				const double k = d / step;
				CHECK(std::abs(k - std::round(k)) < 1e-9);
			}
	}

	SUBCASE("targets beyond coverage are not reported")
	{
		Scene far = scene;
		far.bounds = {-1000, -1000, 1000, 1000};
		far.targets[0].position = {500, 0};
		const auto m = measure_distances(far, link, 10.0, {}, 1);
		CHECK_FALSE(m.full_detection());
		for (std::size_t b = 0; b < 3; ++b)
		{
			CHECK_FALSE(m.detected[b][0]);
			CHECK(m.detected[b][1]);
			CHECK(m.profiles[b].distances.size() == 1);
		}
		far.targets[0].rcs_dbsm = 15;  // a vehicle at 500 m is seen
		CHECK(measure_distances(far, link, 10.0, {}, 1).full_detection());
	}

	SUBCASE("same seed, same draw")
	{
		NoiseModel noise;
		noise.range_sigma_m = 0.5;
		const auto a = measure_distances(scene, link, 10.0, noise, 99);
		const auto b = measure_distances(scene, link, 10.0, noise, 99);
		for (std::size_t i = 0; i < a.profiles.size(); ++i)
		{
			CHECK(a.profiles[i].distances == b.profiles[i].distances);
			CHECK(a.truth[i] == b.truth[i]);
		}
	}
}

TEST_CASE("uniqueness experiment")
{
	ExperimentSpec spec;
	spec.trials = 1;
	spec.seed = 5;

	spec.scene = example_scene({3, 3});
	auto r = run_uniqueness_experiment(spec);
	REQUIRE(r.levels.size() == 1);
	REQUIRE(r.levels[0].records.size() == 1);
	CHECK(r.levels[0].records[0].feasible_count == 2);
	CHECK(r.levels[0].records[0].truth_recovered);

	spec.scene = example_scene({3, 2});
	r = run_uniqueness_experiment(spec);
	CHECK(r.levels[0].records[0].feasible_count == 1);
	CHECK(r.levels[0].aggregates.ghost_fraction == 0.0);

	spec.scene = RandomSceneSpec{};
	spec.trials = 1000;
	spec.seed = 2022;
	r = run_uniqueness_experiment(spec);
	CHECK(r.levels[0].aggregates.ghost_fraction <= 0.01);
	CHECK(r.levels[0].aggregates.truth_recovered_rate == 1.0);
}

TEST_CASE("accuracy experiment")
{
	SUBCASE("errors grow with noise")
	{
		ExperimentSpec spec;
		spec.scene = RandomSceneSpec{};
		spec.trials = 200;
		spec.seed = 17;
		spec.sigma_list = {0.0, 0.01, 0.1, 1.0};
		const auto r = run_accuracy_experiment(spec);
		REQUIRE(r.levels.size() == 4);
		CHECK(r.levels[0].aggregates.rmse_m < 1e-6);
		CHECK(r.levels[0].aggregates.correct_rate == 1.0);
		for (std::size_t i = 2; i < 4; ++i) CHECK(r.levels[i].aggregates.rmse_m >= r.levels[i - 1].aggregates.rmse_m);
	}

	SUBCASE("the unique geometry is resolved under moderate noise")
	{
		ExperimentSpec spec;
		spec.scene = example_scene({3, 2});
		spec.trials = 100;
		spec.seed = 23;
		spec.sigma_list = {0.1};
		const auto r = run_accuracy_experiment(spec);
		CHECK(r.levels[0].aggregates.correct_rate >= 0.95);
	}

	SUBCASE("thread count does not change the report")
	{
		ExperimentSpec spec;
		spec.scene = RandomSceneSpec{4, 3};
		spec.trials = 40;
		spec.seed = 31;
		spec.sigma_list = {0.0, 0.5};
		spec.threads = 1;
		const auto a = run_accuracy_experiment(spec);
		spec.threads = 4;
		const auto b = run_accuracy_experiment(spec);
		for (std::size_t l = 0; l < a.levels.size(); ++l)
		{
			CHECK(a.levels[l].aggregates == b.levels[l].aggregates);
			for (std::size_t i = 0; i < a.levels[l].records.size(); ++i)
				CHECK(a.levels[l].records[i].position_errors_m == b.levels[l].records[i].position_errors_m);
		}
	}

	SUBCASE("aggregates are a pure function of the records")
	{
		ExperimentSpec spec;
		spec.scene = RandomSceneSpec{3, 3, {0, 0, 2000, 2000}};
		spec.trials = 60;
		spec.seed = 3;
		spec.sigma_list = {0.2};
		const auto r = run_accuracy_experiment(spec);
		const auto& lvl = r.levels[0];
		CHECK(compute_aggregates(lvl.records) == lvl.aggregates);
		CHECK(lvl.aggregates.partial > 0);  // a 2 km square exceeds pedestrian coverage
		CHECK(lvl.aggregates.completed + lvl.aggregates.partial == lvl.aggregates.trials);
		for (const auto& rec : lvl.records)
			CHECK((rec.status == TrialStatus::Partial) == (rec.detected_pairs < rec.total_pairs));
	}
}

TEST_CASE("aggregates of nothing are zero")
{
	CHECK(compute_aggregates({}) == Aggregates{});
}
