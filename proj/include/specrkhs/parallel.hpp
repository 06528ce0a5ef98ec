#pragma once

#include <cstddef>
#include <functional>

namespace specrkhs {

// Worker count used by parallel_for; 0 restores the default (hardware concurrency,
// or SPECRKHS_THREADS when set).
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Indices are split into contiguous blocks so callers
// writing to slot i get deterministic output regardless of scheduling. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace specrkhs
