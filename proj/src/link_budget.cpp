#include "netsense/link_budget.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "netsense/errors.hpp"

namespace netsense {

namespace {

void require_positive(double v, const char* name)
{
	if (!(v > 0.0) || !std::isfinite(v))
		throw DomainError(std::string("link budget: ") + name + " must be positive and finite");
}

void require_finite(double v, const char* name)
{
	if (!std::isfinite(v)) throw DomainError(std::string("link budget: ") + name + " must be finite");
}

}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

LinkBudgetParams::LinkBudgetParams(const Db& db) : db_(db)
{
	require_positive(db.pt_watts, "pt_watts");
	require_finite(db.gt_dbi, "gt_dbi");
	require_finite(db.gr_dbi, "gr_dbi");
	require_finite(db.gp_db, "gp_db");
	require_positive(db.carrier_hz, "carrier_hz");
	require_finite(db.rcs_dbsm, "rcs_dbsm");
	require_positive(db.temperature_k, "temperature_k");
	require_positive(db.bandwidth_hz, "bandwidth_hz");
	require_finite(db.noise_factor_db, "noise_factor_db");

	const double lambda = wavelength_m();
	numerator_ = db.pt_watts * db_to_linear(db.gt_dbi) * db_to_linear(db.gr_dbi) * db_to_linear(db.gp_db) *
	             lambda * lambda * db_to_linear(db.rcs_dbsm);
	noise_term_ = std::pow(4.0 * std::numbers::pi, 3) * kBoltzmann * db.temperature_k * db.bandwidth_hz *
	              db_to_linear(db.noise_factor_db);
}

LinkBudgetParams LinkBudgetParams::pedestrian() { return LinkBudgetParams(Db{}); }

LinkBudgetParams LinkBudgetParams::vehicle()
{
	Db db;
	db.rcs_dbsm = 15.0;
	return LinkBudgetParams(db);
}

LinkBudgetParams LinkBudgetParams::with_rcs_dbsm(double rcs_dbsm) const
{
	Db db = db_;
	db.rcs_dbsm = rcs_dbsm;
	return LinkBudgetParams(db);
}

SnrResult sensing_snr(const LinkBudgetParams& params, double range_m)
{
	if (!(range_m > 0.0) || !std::isfinite(range_m)) throw DomainError("sensing_snr: range_m must be positive");
	const double r2 = range_m * range_m;
	const double linear = params.numerator() / (params.noise_term() * r2 * r2);
	return {linear, linear_to_db(linear)};
}

double max_sensing_range(const LinkBudgetParams& params, double snr_min_db)
{
	require_finite(snr_min_db, "snr_min_db");
	return std::pow(params.numerator() / (params.noise_term() * db_to_linear(snr_min_db)), 0.25);
}

double range_resolution(double bandwidth_hz)
{
	if (!(bandwidth_hz > 0.0)) throw DomainError("range_resolution: bandwidth_hz must be positive");
	return kSpeedOfLight / (2.0 * bandwidth_hz);
}

double guard_interval(double max_range_m)
{
	if (!(max_range_m > 0.0)) throw DomainError("guard_interval: max_range_m must be positive");
	return 2.0 * max_range_m / kSpeedOfLight;
}

bool covered(const LinkBudgetParams& params, double snr_min_db, double distance_m)
{
	if (!(distance_m >= 0.0)) throw DomainError("covered: distance_m must be nonnegative");
	return distance_m <= max_sensing_range(params, snr_min_db);
}

}
