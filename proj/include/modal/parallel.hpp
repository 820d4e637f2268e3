#pragma once

#include <cstddef>
#include <functional>

namespace modal {

//! Worker count: hardware concurrency capped by the MODAL_THREADS variable.
std::size_t thread_count();

//! Runs fn(i) for i in [0, count) on up to thread_count() threads. Callers
//! write results into per-index slots so the reduction order is fixed.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace modal
