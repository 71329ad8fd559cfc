#pragma once

#include <functional>

#include "ecarm/arith.hpp"

namespace ecarm::parallel {

// Worker count from ECARM_WORKERS, else 1.
unsigned default_workers();

// Splits [0, count) into at most `workers` contiguous chunks and runs
// body(chunk_index, begin, end) for each, one thread per chunk. The first
// exception thrown by any chunk is rethrown after all threads join.
void for_chunks(u64 count, unsigned workers, const std::function<void(unsigned, u64, u64)>& body);

}  // namespace ecarm::parallel
