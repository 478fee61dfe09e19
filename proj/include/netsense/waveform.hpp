#ifndef NETSENSE_WAVEFORM_HPP
#define NETSENSE_WAVEFORM_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netsense {

using Complex = std::complex<double>;

struct ComplexSequence
{
	std::vector<Complex> samples;
	std::string label;
};

double mean_power(std::span<const Complex> samples);

/// Zadoff-Chu sequence of length N with root u (gcd(u, N) = 1). Constant modulus.
ComplexSequence zadoff_chu(std::size_t length, std::size_t root);

/// Unitary inverse DFT (scaled by 1/sqrt(N)) of frequency-domain symbols.
std::vector<Complex> ofdm_modulate(std::span<const Complex> symbols);

/// One OFDM symbol: N seeded PSK symbols (order 4 = QPSK), inverse DFT, cyclic prefix,
/// normalised to unit average power. N must be a power of two.
ComplexSequence ofdm_symbol(std::size_t num_subcarriers, std::size_t cp_length, std::uint64_t seed,
                            std::size_t constellation_order = 4);

enum class AmbiguityMode
{
	Cyclic,
	Linear,
};

/// |A(tau, nu)| normalised to 1 at the origin. Delay bins are tau = 0..N-1; Doppler bins are
/// centred, nu = -(D/2) .. D-1-(D/2), in units of 1/N cycles per sample.
struct AmbiguitySurface
{
	std::size_t delay_bins = 0;
	std::size_t doppler_bins = 0;
	AmbiguityMode mode = AmbiguityMode::Cyclic;
	std::vector<double> magnitudes;  // row-major, delay-major

	[[nodiscard]] double at(std::size_t delay, std::size_t doppler_column) const
	{
		return magnitudes[delay * doppler_bins + doppler_column];
	}
	[[nodiscard]] long doppler_value(std::size_t column) const
	{
		return static_cast<long>(column) - static_cast<long>(doppler_bins / 2);
	}
	[[nodiscard]] std::size_t zero_doppler_column() const { return doppler_bins / 2; }
};

AmbiguitySurface ambiguity(const ComplexSequence& seq, std::size_t doppler_bins,
                           AmbiguityMode mode = AmbiguityMode::Cyclic);

constexpr double kSidelobeFloorDb = -300.0;

struct SidelobeMetrics
{
	double psl_db;
	double isl_db;
};

/// Side lobes are all cells outside the window |delay| <= exclusion, |nu| <= exclusion around
/// the origin (delay distance is circular for cyclic surfaces). Levels below the floor clamp to it.
SidelobeMetrics sidelobe_metrics(const AmbiguitySurface& surface, std::size_t mainlobe_exclusion = 1);

}

#endif
