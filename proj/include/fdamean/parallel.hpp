#pragma once

#include <cstddef>
#include <functional>

namespace fdamean {

//! Worker count used by parallel_for: the FDAMEAN_THREADS environment
//! variable when set, otherwise 1.
int thread_count();

//! Run body(i) for i in [0, n). With more than one worker the index range is
//! split into contiguous chunks; bodies must write only to their own slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fdamean
