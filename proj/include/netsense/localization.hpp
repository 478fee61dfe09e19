#ifndef NETSENSE_LOCALIZATION_HPP
#define NETSENSE_LOCALIZATION_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "netsense/scene.hpp"

namespace netsense {

struct RangeMeasurement
{
	std::string anchor_id;
	double distance_m = 0.0;
	double sigma_m = 0.0;
};

struct PositionEstimate
{
	Point2 position;
	double residual_rms_m = 0.0;
	bool converged = false;
	std::size_t iterations = 0;
};

/// Zero, one (tangency) or two intersection points of two circles. Throws
/// DegenerateInputError for coincident centres and DomainError for negative radii.
std::vector<Point2> circle_intersections(Point2 c1, double r1, Point2 c2, double r2);

struct TrilaterationOptions
{
	/// Stop when a Gauss-Newton step is shorter than this (meters).
	double step_tol_m = 1e-10;
	/// Stop when the sum of squared misfits improves by less than this.
	double improvement_tol = 1e-12;
	std::size_t max_iterations = 50;
	double collinearity_tol = kDefaultCollinearityTol;
};

/// Residual vector r_i = |x - a_i| - d_i and its Jacobian rows d r_i / d x.
struct RangeResiduals
{
	std::vector<double> residuals;
	std::vector<std::array<double, 2>> jacobian;
};

RangeResiduals range_residuals(std::span<const Point2> centers, std::span<const double> distances, Point2 x);

/// Minimises sum_i (|x - a_i| - d_i)^2 by Gauss-Newton. Seeds are the intersections of the two
/// shortest-range circles (falling through further pairs, then the centroid, when circles miss);
/// the lowest-residual result wins. Throws GeometryError for collinear anchors.
PositionEstimate trilaterate(std::span<const Point2> centers, std::span<const double> distances,
                             const TrilaterationOptions& options = {});

/// Same, matching measurements to anchors by id. Every anchor needs exactly one measurement.
PositionEstimate trilaterate(std::span<const Anchor> anchors, std::span<const RangeMeasurement> measurements,
                             const TrilaterationOptions& options = {});

/// Intersection of the rays leaving a1 and a2 at absolute bearings (radians, counterclockwise
/// from +x). Throws NoIntersectionError for parallel rays, BehindRayError when the lines cross
/// behind either origin.
Point2 triangulate(Point2 a1, double bearing1, Point2 a2, double bearing2);

}

#endif
