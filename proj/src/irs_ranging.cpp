#include "netsense/irs_ranging.hpp"

#include <cmath>
#include <vector>

#include "netsense/errors.hpp"

namespace netsense {

double irs_target_distance(const IrsPathMeasurement& m, Point2 bs_pos, Point2 irs_pos)
{
	if (!(m.direct_roundtrip_m >= 0.0) || !(m.composite_roundtrip_m >= 0.0))
		throw InconsistentMeasurementError("irs: path lengths must be nonnegative");
	if (m.composite_roundtrip_m < m.direct_roundtrip_m / 2.0 - kIrsNegativeSlack)
		throw InconsistentMeasurementError("irs: composite path shorter than the BS-target leg");
	if (bs_pos == irs_pos) throw DegenerateInputError("irs: BS and IRS positions coincide");

	const double l1 = m.direct_roundtrip_m / 2.0;
	const double l3 = true_distance(bs_pos, irs_pos);
	const double l2 = m.composite_roundtrip_m - l1 - l3;
	if (l2 < -kIrsNegativeSlack)
		throw InconsistentMeasurementError("irs: recovered target-IRS distance is negative (" + std::to_string(l2) +
		                                   " m)");
	return std::max(l2, 0.0);
}

IrsPathMeasurement synthesize_irs_paths(const Anchor& bs, const Anchor& irs, Point2 target)
{
	const double l1 = true_distance(bs.position, target);
	const double l2 = true_distance(target, irs.position);
	const double l3 = true_distance(irs.position, bs.position);
	return {bs.id, irs.id, 2.0 * l1, l1 + l2 + l3};
}

PositionEstimate localize_with_heterogeneous_anchors(std::span<const Anchor> bss,
                                                     std::span<const RangeMeasurement> bs_measurements,
                                                     const Anchor& irs, double irs_distance_m,
                                                     const TrilaterationOptions& options)
{
	if (bss.size() < 2) throw GeometryError("irs: need at least two BS anchors");
	std::vector<Anchor> anchors(bss.begin(), bss.end());
	anchors.push_back(irs);
	std::vector<RangeMeasurement> measurements(bs_measurements.begin(), bs_measurements.end());
	measurements.push_back({irs.id, irs_distance_m, 0.0});
	return trilaterate(anchors, measurements, options);
}

}
