#ifndef NETSENSE_LINK_BUDGET_HPP
#define NETSENSE_LINK_BUDGET_HPP

namespace netsense {

constexpr double kSpeedOfLight = 2.998e8;  // m/s
constexpr double kBoltzmann = 1.38e-23;    // J/K

double db_to_linear(double db);
double linear_to_db(double linear);

/// Radar range equation inputs. Gains, RCS and noise factor are given in dB and converted
/// to linear once, in the constructor; all evaluation is linear.
class LinkBudgetParams
{
public:
	struct Db
	{
		double pt_watts = 10.0;
		double gt_dbi = 20.0;
		double gr_dbi = 20.0;
		double gp_db = 10.0;
		double carrier_hz = 3.5e9;
		double rcs_dbsm = -10.0;
		double temperature_k = 290.0;
		double bandwidth_hz = 100e6;
		double noise_factor_db = 5.0;
	};

	/// Throws DomainError unless every physical quantity is strictly positive and finite.
	explicit LinkBudgetParams(const Db& db);

	/// Base-station defaults for a pedestrian (-10 dBsm) target.
	static LinkBudgetParams pedestrian();
	/// Same as pedestrian() with a 15 dBsm vehicle.
	static LinkBudgetParams vehicle();

	[[nodiscard]] const Db& db() const { return db_; }
	[[nodiscard]] LinkBudgetParams with_rcs_dbsm(double rcs_dbsm) const;

	[[nodiscard]] double wavelength_m() const { return kSpeedOfLight / db_.carrier_hz; }

	/// P_t G_t G_r G_p lambda^2 sigma, the range-independent numerator.
	[[nodiscard]] double numerator() const { return numerator_; }
	/// (4 pi)^3 k T0 B N_f.
	[[nodiscard]] double noise_term() const { return noise_term_; }

private:
	Db db_;
	double numerator_;
	double noise_term_;
};

struct SnrResult
{
	double linear;
	double db;
};

SnrResult sensing_snr(const LinkBudgetParams& params, double range_m);

/// Range at which sensing_snr equals snr_min_db, solved in closed form.
double max_sensing_range(const LinkBudgetParams& params, double snr_min_db);

/// c / (2B).
double range_resolution(double bandwidth_hz);

/// Idle time after downlink so the echo from max_range_m returns before uplink: 2R/c.
double guard_interval(double max_range_m);

/// Inclusive: a target exactly at the maximum range is covered.
bool covered(const LinkBudgetParams& params, double snr_min_db, double distance_m);

}

#endif
