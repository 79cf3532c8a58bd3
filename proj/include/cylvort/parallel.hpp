#pragma once

// Minimal worker pool helper. CYLVORT_THREADS (integer >= 1) caps the
// number of workers; unset or unparsable values fall back to the hardware
// concurrency. Loops with one worker run inline.

#include <cstddef>
#include <functional>

namespace cylvort {

unsigned worker_count();

// Invoke fn(i) for i in [0, n), split across workers in contiguous blocks.
// fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace cylvort
