#pragma once

#include <cstddef>
#include <functional>

namespace nhtopo {

/// Worker count used by parallel_for. Resolution order: NHB_THREADS, then the
/// value passed to set_thread_count, then 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). If several calls throw, the exception of the
/// lowest index is rethrown, so failures do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nhtopo
