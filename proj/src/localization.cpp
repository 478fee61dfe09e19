#include "netsense/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netsense/errors.hpp"

namespace netsense {

std::vector<Point2> circle_intersections(Point2 c1, double r1, Point2 c2, double r2)
{
	if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw DomainError("circle_intersections: radii must be nonnegative");
	const Point2 delta = c2 - c1;
	const double d = norm(delta);
	if (d == 0.0) throw DegenerateInputError("circle_intersections: coincident centres");

	const double scale = std::max({r1, r2, d});
	const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
	const double h2 = r1 * r1 - a * a;
	const double tangency = 1e-9 * scale;
	const Point2 ux = (1.0 / d) * delta;
	const Point2 base = c1 + a * ux;
	if (h2 < 0.0)
	{
		// Externally or internally tangent up to rounding.
		const double gap = d > r1 + r2 ? d - (r1 + r2) : std::abs(r1 - r2) - d;
		if (gap <= tangency * 1e-3) return {base};
		return {};
	}
	const double h = std::sqrt(h2);
	if (h <= tangency * 1e-3) return {base};
	const Point2 uy{-ux.y, ux.x};
	return {base + h * uy, base - h * uy};
}

RangeResiduals range_residuals(std::span<const Point2> centers, std::span<const double> distances, Point2 x)
{
	RangeResiduals out;
	out.residuals.resize(centers.size());
	out.jacobian.resize(centers.size());
	for (std::size_t i = 0; i < centers.size(); ++i)
	{
		const Point2 diff = x - centers[i];
		const double r = norm(diff);
		out.residuals[i] = r - distances[i];
		// The gradient of |x - a| is undefined at the anchor itself; zero is a valid subgradient.
		out.jacobian[i] = r > 0.0 ? std::array<double, 2>{diff.x / r, diff.y / r} : std::array<double, 2>{0.0, 0.0};
	}
	return out;
}

namespace {

double cost(std::span<const Point2> centers, std::span<const double> distances, Point2 x)
{
	double s = 0.0;
	for (std::size_t i = 0; i < centers.size(); ++i)
	{
		const double r = true_distance(x, centers[i]) - distances[i];
		s += r * r;
	}
	return s;
}

PositionEstimate gauss_newton(std::span<const Point2> centers, std::span<const double> distances, Point2 seed,
                              const TrilaterationOptions& options)
{
	PositionEstimate est;
	Point2 x = seed;
	double f = cost(centers, distances, x);
	for (std::size_t it = 0; it < options.max_iterations; ++it)
	{
		est.iterations = it + 1;
		const auto rr = range_residuals(centers, distances, x);
		double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
		for (std::size_t i = 0; i < rr.residuals.size(); ++i)
		{
			const auto& j = rr.jacobian[i];
			a11 += j[0] * j[0];
			a12 += j[0] * j[1];
			a22 += j[1] * j[1];
			g1 += j[0] * rr.residuals[i];
			g2 += j[1] * rr.residuals[i];
		}
		double det = a11 * a22 - a12 * a12;
		if (!(std::abs(det) > 1e-14 * (a11 + a22) * (a11 + a22)))
		{
			// Rank-deficient normal matrix (iterate sits on an anchor or on a line through all of
			// them): add a small ridge so the step stays defined.
			const double ridge = 1e-6 * std::max(1.0, a11 + a22);
			a11 += ridge;
			a22 += ridge;
			det = a11 * a22 - a12 * a12;
		}
		Point2 step{-(a22 * g1 - a12 * g2) / det, -(a11 * g2 - a12 * g1) / det};

		// Halve until the cost does not increase.
		double f_new = cost(centers, distances, x + step);
		for (int k = 0; k < 30 && f_new > f; ++k)
		{
			step = 0.5 * step;
			f_new = cost(centers, distances, x + step);
		}
		if (f_new > f) break;

		x = x + step;
		const double improvement = f - f_new;
		f = f_new;
		if (norm(step) < options.step_tol_m || improvement < options.improvement_tol)
		{
			est.converged = true;
			break;
		}
	}
	est.position = x;
	est.residual_rms_m = std::sqrt(f / static_cast<double>(centers.size()));
	return est;
}

}

PositionEstimate trilaterate(std::span<const Point2> centers, std::span<const double> distances,
                             const TrilaterationOptions& options)
{
	if (centers.size() < 3) throw GeometryError("trilaterate: need at least 3 anchors");
	if (centers.size() != distances.size()) throw DomainError("trilaterate: one distance per anchor required");
	for (double d : distances)
		if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("trilaterate: distances must be finite and nonnegative");
	if (all_collinear(centers, options.collinearity_tol)) throw GeometryError("trilaterate: anchors are collinear");

	// Circle pairs ordered by range sum; the first pair that intersects supplies the seeds.
	std::vector<std::size_t> order(centers.size());
	std::iota(order.begin(), order.end(), 0);
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
	std::vector<std::pair<std::size_t, std::size_t>> pairs;
	for (std::size_t i = 0; i < order.size(); ++i)
		for (std::size_t j = i + 1; j < order.size(); ++j) pairs.emplace_back(order[i], order[j]);
	std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
		return distances[p.first] + distances[p.second] < distances[q.first] + distances[q.second];
	});

	std::vector<Point2> seeds;
	for (const auto& [i, j] : pairs)
	{
		if (centers[i] == centers[j]) continue;
		seeds = circle_intersections(centers[i], distances[i], centers[j], distances[j]);
		if (!seeds.empty()) break;
	}
	if (seeds.empty())
	{
		Point2 centroid{};
		for (const auto& c : centers) centroid = centroid + c;
		seeds.push_back((1.0 / static_cast<double>(centers.size())) * centroid);
	}

	PositionEstimate best;
	best.residual_rms_m = std::numeric_limits<double>::infinity();
	for (const auto& seed : seeds)
	{
		auto est = gauss_newton(centers, distances, seed, options);
		if (est.residual_rms_m < best.residual_rms_m) best = est;
	}
	return best;
}

PositionEstimate trilaterate(std::span<const Anchor> anchors, std::span<const RangeMeasurement> measurements,
                             const TrilaterationOptions& options)
{
	std::vector<Point2> centers;
	std::vector<double> distances;
	for (const auto& a : anchors)
	{
		auto matches = std::count_if(measurements.begin(), measurements.end(),
		                             [&](const RangeMeasurement& m) { return m.anchor_id == a.id; });
		if (matches != 1) throw DomainError("trilaterate: expected exactly one measurement for anchor " + a.id);
		auto it = std::find_if(measurements.begin(), measurements.end(),
		                       [&](const RangeMeasurement& m) { return m.anchor_id == a.id; });
		if (!(it->sigma_m >= 0.0)) throw DomainError("trilaterate: sigma_m must be nonnegative");
		centers.push_back(a.position);
		distances.push_back(it->distance_m);
	}
	if (measurements.size() != anchors.size())
		throw DomainError("trilaterate: measurement for an unknown anchor");
	return trilaterate(centers, distances, options);
}

Point2 triangulate(Point2 a1, double bearing1, Point2 a2, double bearing2)
{
	if (a1 == a2) throw DegenerateInputError("triangulate: anchors coincide");
	const Point2 u1{std::cos(bearing1), std::sin(bearing1)};
	const Point2 u2{std::cos(bearing2), std::sin(bearing2)};
	// a1 + t1 u1 = a2 + t2 u2, solved by Cramer's rule; det = sin(b2 - b1).
	const double det = u1.y * u2.x - u1.x * u2.y;
	if (std::abs(std::sin(bearing1 - bearing2)) < 1e-12) throw NoIntersectionError("triangulate: bearings are parallel");
	const Point2 b = a2 - a1;
	const double t1 = (b.y * u2.x - b.x * u2.y) / det;
	const double t2 = (u1.x * b.y - u1.y * b.x) / det;
	const double slack = 1e-12 * std::max(1.0, norm(b));
	if (t1 < -slack || t2 < -slack) throw BehindRayError("triangulate: lines intersect behind a ray origin");
	return a1 + t1 * u1;
}

}
