#ifndef NETSENSE_PARALLEL_HPP
#define NETSENSE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace netsense {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
/// fn must write only to slot i of its output; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn)
{
	if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
	threads = std::min(threads, n);
	if (threads <= 1)
	{
		for (std::size_t i = 0; i < n; ++i) fn(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr error;
	std::mutex error_mutex;
	std::vector<std::jthread> workers;
	workers.reserve(threads);
	for (std::size_t t = 0; t < threads; ++t)
		workers.emplace_back([&] {
			for (std::size_t i = next++; i < n; i = next++)
			{
				try
				{
					fn(i);
				}
				catch (...)
				{
					std::lock_guard lock(error_mutex);
					if (!error) error = std::current_exception();
				}
			}
		});
	workers.clear();
	if (error) std::rethrow_exception(error);
}

}

#endif
