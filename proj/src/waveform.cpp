#include "netsense/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "netsense/errors.hpp"
#include "netsense/random.hpp"

namespace netsense {

namespace {

constexpr double kPi = std::numbers::pi;

// In-place unnormalised DFT. sign = FFTW_FORWARD (e^{-j}) or FFTW_BACKWARD (e^{+j}).
class Dft
{
public:
	Dft(std::size_t n, int sign) : n_(n), buf_(fftw_alloc_complex(n))
	{
		plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, sign, FFTW_ESTIMATE);
	}
	~Dft()
	{
		fftw_destroy_plan(plan_);
		fftw_free(buf_);
	}
	Dft(const Dft&) = delete;
	Dft& operator=(const Dft&) = delete;

	std::span<Complex> data() { return {reinterpret_cast<Complex*>(buf_), n_}; }
	void execute() { fftw_execute(plan_); }

private:
	std::size_t n_;
	fftw_complex* buf_;
	fftw_plan plan_;
};

}

double mean_power(std::span<const Complex> samples)
{
	if (samples.empty()) return 0.0;
	double sum = 0.0;
	for (const auto& s : samples) sum += std::norm(s);
	return sum / static_cast<double>(samples.size());
}

ComplexSequence zadoff_chu(std::size_t length, std::size_t root)
{
	if (length < 2) throw ParameterError("zadoff_chu: length must be at least 2");
	if (root == 0 || root >= length) throw InvalidRootError("zadoff_chu: root must satisfy 0 < u < N");
	if (std::gcd(root, length) != 1) throw InvalidRootError("zadoff_chu: root must be coprime with length");

	ComplexSequence seq;
	seq.label = "zc(" + std::to_string(length) + "," + std::to_string(root) + ")";
	seq.samples.resize(length);
	const bool odd = length % 2 == 1;
	for (std::size_t n = 0; n < length; ++n)
	{
		// u*n*(n+1) grows fast; reduce mod 2N first so the phase stays accurate.
		const std::size_t mod = 2 * length;
		const std::size_t q = odd ? (n * (n + 1)) % mod : (n * n) % mod;
		const std::size_t k = (root % mod) * q % mod;
		seq.samples[n] = std::polar(1.0, -kPi * static_cast<double>(k) / static_cast<double>(length));
	}
	return seq;
}

std::vector<Complex> ofdm_modulate(std::span<const Complex> symbols)
{
	if (symbols.empty()) throw DomainError("ofdm_modulate: no symbols");
	Dft idft(symbols.size(), FFTW_BACKWARD);
	std::copy(symbols.begin(), symbols.end(), idft.data().begin());
	idft.execute();
	const double scale = 1.0 / std::sqrt(static_cast<double>(symbols.size()));
	std::vector<Complex> out(idft.data().begin(), idft.data().end());
	for (auto& s : out) s *= scale;
	return out;
}

ComplexSequence ofdm_symbol(std::size_t num_subcarriers, std::size_t cp_length, std::uint64_t seed,
                            std::size_t constellation_order)
{
	const std::size_t n = num_subcarriers;
	if (n < 2 || (n & (n - 1)) != 0) throw ParameterError("ofdm_symbol: num_subcarriers must be a power of two");
	if (cp_length >= n) throw ParameterError("ofdm_symbol: cp_length must be smaller than num_subcarriers");
	if (constellation_order < 2) throw ParameterError("ofdm_symbol: constellation order must be at least 2");

	Rng rng = make_rng(seed);
	std::uniform_int_distribution<std::size_t> pick(0, constellation_order - 1);
	std::vector<Complex> symbols(n);
	const double m = static_cast<double>(constellation_order);
	for (auto& s : symbols) s = std::polar(1.0, kPi * (2.0 * static_cast<double>(pick(rng)) + 1.0) / m);

	const auto body = ofdm_modulate(symbols);
	ComplexSequence seq;
	seq.label = "ofdm(" + std::to_string(n) + ",cp=" + std::to_string(cp_length) + ")";
	seq.samples.reserve(n + cp_length);
	seq.samples.insert(seq.samples.end(), body.end() - static_cast<std::ptrdiff_t>(cp_length), body.end());
	seq.samples.insert(seq.samples.end(), body.begin(), body.end());
	const double scale = 1.0 / std::sqrt(mean_power(seq.samples));
	for (auto& s : seq.samples) s *= scale;
	return seq;
}

AmbiguitySurface ambiguity(const ComplexSequence& seq, std::size_t doppler_bins, AmbiguityMode mode)
{
	const auto& x = seq.samples;
	const std::size_t n = x.size();
	if (n == 0) throw DomainError("ambiguity: empty sequence");
	if (doppler_bins == 0) throw ParameterError("ambiguity: doppler_bins must be at least 1");

	AmbiguitySurface surface;
	surface.delay_bins = n;
	surface.doppler_bins = doppler_bins;
	surface.mode = mode;
	surface.magnitudes.assign(n * doppler_bins, 0.0);

	// For a fixed delay the Doppler cut is a backward DFT of the lag product x[n] conj(x[n - tau]);
	// integer Doppler nu reads bin nu mod N.
	Dft dft(n, FFTW_BACKWARD);
	auto buf = dft.data();
	const auto half = static_cast<long>(doppler_bins / 2);
	const auto nl = static_cast<long>(n);
	for (std::size_t tau = 0; tau < n; ++tau)
	{
		for (std::size_t i = 0; i < n; ++i)
		{
			if (i >= tau)
				buf[i] = x[i] * std::conj(x[i - tau]);
			else
				buf[i] = mode == AmbiguityMode::Cyclic ? x[i] * std::conj(x[i + n - tau]) : Complex{};
		}
		dft.execute();
		for (std::size_t col = 0; col < doppler_bins; ++col)
		{
			const long nu = static_cast<long>(col) - half;
			const auto bin = static_cast<std::size_t>(((nu % nl) + nl) % nl);
			surface.magnitudes[tau * doppler_bins + col] = std::abs(buf[bin]);
		}
	}

	const double peak = surface.at(0, surface.zero_doppler_column());
	if (!(peak > 0.0)) throw DomainError("ambiguity: sequence has zero energy");
	// Cauchy-Schwarz bounds every cell by the zero-shift energy; the clamp only removes rounding.
	for (auto& v : surface.magnitudes) v = std::min(v / peak, 1.0);
	surface.magnitudes[surface.zero_doppler_column()] = 1.0;
	return surface;
}

SidelobeMetrics sidelobe_metrics(const AmbiguitySurface& surface, std::size_t mainlobe_exclusion)
{
	const std::size_t n = surface.delay_bins;
	double peak_side = 0.0;
	double energy_side = 0.0;
	std::size_t outside = 0;
	for (std::size_t tau = 0; tau < n; ++tau)
	{
		const std::size_t delay_dist = surface.mode == AmbiguityMode::Cyclic ? std::min(tau, n - tau) : tau;
		for (std::size_t col = 0; col < surface.doppler_bins; ++col)
		{
			const auto nu = static_cast<std::size_t>(std::labs(surface.doppler_value(col)));
			if (delay_dist <= mainlobe_exclusion && nu <= mainlobe_exclusion) continue;
			const double v = surface.at(tau, col);
			peak_side = std::max(peak_side, v);
			energy_side += v * v;
			++outside;
		}
	}
	if (outside == 0) throw ParameterError("sidelobe_metrics: exclusion window covers the whole surface");

	auto floor_db = [](double db) { return std::isfinite(db) ? std::max(db, kSidelobeFloorDb) : kSidelobeFloorDb; };
	return {floor_db(20.0 * std::log10(peak_side)), floor_db(10.0 * std::log10(energy_side))};
}

}
