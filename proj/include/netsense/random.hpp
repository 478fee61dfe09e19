#ifndef NETSENSE_RANDOM_HPP
#define NETSENSE_RANDOM_HPP

#include <cstdint>
#include <random>

namespace netsense {

using Rng = std::mt19937_64;

/// Seed for stream `index` of a master seed. Trials index their own stream so that
/// scheduling order never changes what a trial draws.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index)
{
	std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
	                  static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
	std::uint32_t out[2];
	seq.generate(out, out + 2);
	return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline Rng make_rng(std::uint64_t seed)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
	return Rng(seq);
}

}

#endif
