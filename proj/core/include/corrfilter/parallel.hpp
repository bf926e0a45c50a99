#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace corrfilter {

/// Worker cap for parallel_for. 0 restores the default (hardware concurrency).
void set_thread_count(std::size_t threads) noexcept;
std::size_t thread_count() noexcept;

/// Runs body(i) for i in [0, count). Work units must be independent; results
/// are expected to be written to per-index slots so the outcome does not
/// depend on scheduling. Nested calls run sequentially on the calling worker.
/// The first exception thrown by any unit is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64 mix of a base seed and a stream index, for independent
/// sub-seeds (restarts, replicas, tickers).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace corrfilter
