#pragma once

#include <cstddef>
#include <functional>

namespace tamegeo {

// Worker cap: hardware concurrency, clamped by the TAMEGEO_THREADS
// environment variable when it is set to a positive integer.
int max_threads();

// Number of chunks parallel_chunks will use for a loop of length n.
// Depends on n only, never on the thread count, so chunked results can be
// concatenated in chunk order to give schedule-independent output.
std::size_t chunk_count(std::size_t n);

// Runs fn(chunk_index, begin, end) over disjoint ranges covering [0, n).
// Exceptions are rethrown in chunk order.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn);

}  // namespace tamegeo
