#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "netsense/errors.hpp"
#include "netsense/localization.hpp"
#include "netsense/random.hpp"
#include "oracles.hpp"

using namespace netsense;

namespace {

bool on_circle(Point2 p, Point2 c, double r, double tol) { return std::abs(oracle::distance(p, c) - r) <= tol; }

std::vector<Point2> example_bss() { return {{-3.5, 0}, {5, 0}, {0, -4.5}}; }

}

TEST_CASE("circle_intersections")
{
	SUBCASE("tangent")
	{
		const auto pts = circle_intersections({0, 0}, 1, {2, 0}, 1);
		REQUIRE(pts.size() == 1);
		CHECK(pts[0] == Point2{1, 0});
	}
	SUBCASE("3-4-5")
	{
		auto pts = circle_intersections({0, 0}, 5, {6, 0}, 5);
		REQUIRE(pts.size() == 2);
		std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.y < b.y; });
		CHECK(pts[0].x == doctest::Approx(3.0));
		CHECK(pts[0].y == doctest::Approx(-4.0));
		CHECK(pts[1].x == doctest::Approx(3.0));
		CHECK(pts[1].y == doctest::Approx(4.0));
	}
	SUBCASE("disjoint and nested")
	{
		CHECK(circle_intersections({0, 0}, 1, {10, 0}, 1).empty());
		CHECK(circle_intersections({0, 0}, 10, {1, 0}, 1).empty());
	}
	SUBCASE("errors")
	{
		CHECK_THROWS_AS(circle_intersections({1, 1}, 1, {1, 1}, 2), DegenerateInputError);
		CHECK_THROWS_AS(circle_intersections({0, 0}, -1, {1, 0}, 1), DomainError);
	}
	SUBCASE("every returned point lies on both circles")
	{
		Rng rng = make_rng(17);
		std::uniform_real_distribution<double> u(-100, 100);
		std::uniform_real_distribution<double> r(0, 150);
		int hits = 0;
		for (int i = 0; i < 2000; ++i)
		{
			const Point2 c1{u(rng), u(rng)}, c2{u(rng), u(rng)};
			const double r1 = r(rng), r2 = r(rng);
			for (const auto& p : circle_intersections(c1, r1, c2, r2))
			{
				++hits;
				const double tol = 1e-9 * std::max(r1, r2);
				CHECK(on_circle(p, c1, r1, tol));
				CHECK(on_circle(p, c2, r2, tol));
			}
		}
		CHECK(hits > 500);
	}
}

TEST_CASE("range_residuals Jacobian matches central differences")
{
	Rng rng = make_rng(23);
	std::uniform_real_distribution<double> u(-200, 200);
	const std::vector<Point2> centers{{-50, 10}, {80, -20}, {5, 120}, {140, 140}};
	const std::vector<double> d{10, 20, 30, 40};
	for (int i = 0; i < 100; ++i)
	{
		const Point2 x{u(rng), u(rng)};
		const auto analytic = range_residuals(centers, d, x);
		const auto numeric = oracle::fd_jacobian(centers, x, 1e-6);
		for (std::size_t k = 0; k < centers.size(); ++k)
		{
			CHECK(analytic.residuals[k] == doctest::Approx(oracle::distance(x, centers[k]) - d[k]).epsilon(1e-12));
			for (int c = 0; c < 2; ++c)
				CHECK(std::abs(analytic.jacobian[k][c] - numeric[k][c]) <= 1e-5 * std::max(1.0, std::abs(numeric[k][c])));
		}
	}
}

TEST_CASE("trilaterate")
{
	TrilaterationOptions opts;

	SUBCASE("first worked example target")
	{
		const std::vector<double> d{std::sqrt(51.25), std::sqrt(13.0), std::sqrt(65.25)};
		const auto est = trilaterate(example_bss(), d, opts);
		CHECK(oracle::distance(est.position, {3, 3}) < 1e-6);
		CHECK(est.residual_rms_m < 1e-6);
		CHECK(est.converged);
		CHECK(est.iterations <= opts.max_iterations);
	}

	SUBCASE("zero distance to an anchor recovers that anchor")
	{
		const auto bss = example_bss();
		std::vector<double> d;
		for (const auto& a : bss) d.push_back(oracle::distance(a, bss[1]));
		const auto est = trilaterate(bss, d, opts);
		CHECK(oracle::distance(est.position, bss[1]) < 1e-6);
	}

	SUBCASE("100 random targets with exact distances")
	{
		Rng rng = make_rng(31);
		std::uniform_real_distribution<double> u(0, 300);
		const std::vector<Point2> bss{{10, 20}, {280, 40}, {150, 290}, {200, 200}};
		for (int i = 0; i < 100; ++i)
		{
			const Point2 t{u(rng), u(rng)};
			std::vector<double> d;
			for (const auto& a : bss) d.push_back(oracle::distance(a, t));
			const auto est = trilaterate(bss, d, opts);
			CHECK(oracle::distance(est.position, t) < 1e-6);
		}
	}

	SUBCASE("by anchor id")
	{
		const std::vector<Anchor> anchors{{"a", AnchorKind::ActiveBS, {-3.5, 0}},
		                                  {"b", AnchorKind::ActiveBS, {5, 0}},
		                                  {"c", AnchorKind::ActiveBS, {0, -4.5}}};
		const std::vector<RangeMeasurement> m{
			{"c", std::sqrt(11.25), 0}, {"a", std::sqrt(9.25), 0}, {"b", std::sqrt(73.0), 0}};
		const auto est = trilaterate(anchors, m);
		CHECK(oracle::distance(est.position, {-3, -3}) < 1e-6);

		const std::vector<RangeMeasurement> missing{{"a", 1, 0}, {"b", 1, 0}};
		CHECK_THROWS_AS(trilaterate(anchors, missing), DomainError);
	}

	SUBCASE("disjoint circles fall back to another seed, never an error")
	{
		// Ranges far too short to meet: the estimate is the least-squares compromise.
		const std::vector<double> d{0.5, 0.5, 0.5};
		const auto est = trilaterate(example_bss(), d, opts);
		CHECK(std::isfinite(est.position.x));
		CHECK(est.residual_rms_m > 1.0);
	}

	SUBCASE("errors")
	{
		const std::vector<Point2> line{{0, 0}, {1, 0}, {2, 0}};
		CHECK_THROWS_AS(trilaterate(line, std::vector<double>{1, 1, 1}, opts), GeometryError);
		CHECK_THROWS_AS(trilaterate(example_bss(), std::vector<double>{1, 1}, opts), DomainError);
		CHECK_THROWS_AS(trilaterate(example_bss(), std::vector<double>{1, -1, 1}, opts), DomainError);
		const std::vector<Point2> two{{0, 0}, {1, 0}};
		CHECK_THROWS_AS(trilaterate(two, std::vector<double>{1, 1}, opts), GeometryError);
	}
}

TEST_CASE("median error grows with range noise")
{
	const std::vector<Point2> bss{{0, 0}, {300, 0}, {150, 260}};
	Rng rng = make_rng(41);
	std::uniform_real_distribution<double> u(50, 250);
	std::normal_distribution<double> g;
	std::vector<double> medians;
	for (double sigma : {0.01, 0.1, 1.0})
	{
		std::vector<double> errors;
		for (int i = 0; i < 1000; ++i)
		{
			const Point2 t{u(rng), u(rng)};
			std::vector<double> d;
			for (const auto& a : bss) d.push_back(std::max(0.0, oracle::distance(a, t) + sigma * g(rng)));
			errors.push_back(oracle::distance(trilaterate(bss, d).position, t));
		}
		std::nth_element(errors.begin(), errors.begin() + 500, errors.end());
		medians.push_back(errors[500]);
	}
	CHECK(medians[0] < medians[1]);
	CHECK(medians[1] < medians[2]);
}

TEST_CASE("triangulate")
{
	const double deg = oracle::kPi / 180.0;
	const auto p = triangulate({0, 0}, 45 * deg, {2, 0}, 135 * deg);
	CHECK(p.x == doctest::Approx(1.0));
	CHECK(p.y == doctest::Approx(1.0));

	CHECK_THROWS_AS(triangulate({0, 0}, 0.0, {0, 2}, 0.0), NoIntersectionError);
	CHECK_THROWS_AS(triangulate({0, 0}, 0.0, {0, 2}, oracle::kPi), NoIntersectionError);
	CHECK_THROWS_AS(triangulate({0, 0}, 225 * deg, {2, 0}, 315 * deg), BehindRayError);
	CHECK_THROWS_AS(triangulate({0, 0}, 45 * deg, {2, 0}, 315 * deg), BehindRayError);
	CHECK_THROWS_AS(triangulate({1, 1}, 0.3, {1, 1}, 0.5), DegenerateInputError);

	Rng rng = make_rng(43);
	std::uniform_real_distribution<double> u(-1000, 1000);
	int checked = 0;
	for (int i = 0; i < 1000; ++i)
	{
		const Point2 a1{u(rng), u(rng)}, a2{u(rng), u(rng)}, t{u(rng), u(rng)};
		const double b1 = std::atan2(t.y - a1.y, t.x - a1.x);
		const double b2 = std::atan2(t.y - a2.y, t.x - a2.x);
		if (std::abs(std::sin(b1 - b2)) < 0.1) continue;  // near-parallel sightlines are ill-posed
		++checked;
		CHECK(oracle::distance(triangulate(a1, b1, a2, b2), t) < 1e-9);
	}
	CHECK(checked > 800);
}
