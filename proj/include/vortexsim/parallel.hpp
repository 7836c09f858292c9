#ifndef VORTEXSIM_PARALLEL_HPP
#define VORTEXSIM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace vortexsim
{

/// Number of worker threads used for row-parallel loops. 1 (the default)
/// runs everything on the calling thread.
void setThreadCount(unsigned count);
unsigned threadCount();

/// Calls body(row) for every row in [0, rows). Rows are split into contiguous
/// blocks, one per thread; body must only write data owned by its row, which
/// keeps results independent of the thread count.
void parallelRows(std::size_t rows, const std::function<void(std::size_t)>& body);

} // namespace vortexsim

#endif
