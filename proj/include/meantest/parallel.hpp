#ifndef MEANTEST_PARALLEL_HPP
#define MEANTEST_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace meantest {

// Runs fn(i) for i in [0, count) on up to max_workers threads (0 = hardware
// concurrency). Work is striped by index; fn must be safe to call
// concurrently for distinct i. Exceptions escaping fn are rethrown on the
// calling thread (first one wins).
void parallel_for(std::size_t count, int max_workers, const std::function<void(std::size_t)>& fn);

}  // namespace meantest

#endif
