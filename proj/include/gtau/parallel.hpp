#ifndef GTAU_PARALLEL_HPP
#define GTAU_PARALLEL_HPP

#include <cstddef>
#include <functional>

#include "gtau/common.hpp"

namespace gtau {

// Thread cap: min(GELFOND_TAU_THREADS, hardware), at least 1.
unsigned thread_cap();

// Overrides the cap for the current process (0 = back to env/hardware).
// Used by determinism tests that must rerun identical work at different
// parallelism degrees without re-execing.
void set_thread_cap_override(unsigned n);

// Runs fn(chunk) for chunk = 0..n_chunks-1 on up to thread_cap() threads.
// Chunk indices are fixed by the caller, so any reduction done per chunk
// slot and combined in index order is independent of the schedule.
void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn);

}  // namespace gtau

#endif
