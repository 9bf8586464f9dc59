#pragma once

#include <cstddef>
#include <functional>

namespace levylab {

/// Worker count used by parallel_for. Defaults to the LEVYLAB_THREADS
/// environment variable, else std::thread::hardware_concurrency().
unsigned thread_count() noexcept;
void set_thread_count(unsigned n) noexcept;

/// Runs task(i) for i in [0, count). Tasks must write only to their own
/// output slot; results therefore never depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace levylab
