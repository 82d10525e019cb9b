#pragma once

#include <cstddef>
#include <functional>

namespace colhel {

// Runs fn(chunk_index) for every chunk in [0, n_chunks) on `workers` threads
// (0 = hardware concurrency). Chunks are claimed through an atomic counter;
// callers must write results into per-chunk slots so the final reduction does
// not depend on scheduling. Exceptions from workers are rethrown on the
// calling thread.
void parallel_chunks(std::size_t n_chunks, unsigned workers, const std::function<void(std::size_t)>& fn);

unsigned resolve_workers(unsigned requested);

} // namespace colhel
