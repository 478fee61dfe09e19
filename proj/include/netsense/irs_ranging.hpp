#ifndef NETSENSE_IRS_RANGING_HPP
#define NETSENSE_IRS_RANGING_HPP

#include <span>
#include <string>

#include "netsense/localization.hpp"
#include "netsense/scene.hpp"

namespace netsense {

/// Echo lengths one BS measures for one target: the direct round trip BS->target->BS (2 L1)
/// and the composite BS->target->IRS->BS (L1 + L2 + L3).
struct IrsPathMeasurement
{
	std::string bs_id;
	std::string irs_id;
	double direct_roundtrip_m = 0.0;
	double composite_roundtrip_m = 0.0;
};

constexpr double kIrsNegativeSlack = 1e-6;

/// Target-IRS distance L2 = composite - L1 - L3, with L1 = direct/2 and L3 = |BS - IRS|.
/// Slightly negative results (within kIrsNegativeSlack) clamp to 0; anything below throws
/// InconsistentMeasurementError.
double irs_target_distance(const IrsPathMeasurement& m, Point2 bs_pos, Point2 irs_pos);

/// Synthesises the exact measurement a BS would see for a target.
IrsPathMeasurement synthesize_irs_paths(const Anchor& bs, const Anchor& irs, Point2 target);

/// Trilateration over the BS ranges plus the IRS treated as one more anchor.
PositionEstimate localize_with_heterogeneous_anchors(std::span<const Anchor> bss,
                                                     std::span<const RangeMeasurement> bs_measurements,
                                                     const Anchor& irs, double irs_distance_m,
                                                     const TrilaterationOptions& options = {});

}

#endif
