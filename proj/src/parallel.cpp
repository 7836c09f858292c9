#include "vortexsim/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace vortexsim
{

namespace
{
std::atomic<unsigned> gThreads{1};
}

void setThreadCount(unsigned count)
{
  gThreads = std::max(1u, count);
}

unsigned threadCount()
{
  return gThreads;
}

void parallelRows(std::size_t rows, const std::function<void(std::size_t)>& body)
{
  const std::size_t workers = std::min<std::size_t>(gThreads, rows);
  if (workers <= 1) {
    for (std::size_t r = 0; r < rows; ++r)
      body(r);
    return;
  }

  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (rows + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(rows, begin + block);
    pool.emplace_back([&body, begin, end] {
      for (std::size_t r = begin; r < end; ++r)
        body(r);
    });
  }
}

} // namespace vortexsim
