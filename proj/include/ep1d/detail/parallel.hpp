#ifndef EP1D_DETAIL_PARALLEL_HPP
#define EP1D_DETAIL_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ep1d::detail {

/// Index-sharded parallel for: calls fn(i) for i in [0, n).  Work is split
/// into contiguous blocks by index, so any writes fn makes to slot i of a
/// pre-sized output vector land identically for every worker count; with
/// workers <= 1 it degenerates to a plain loop.  The first exception thrown
/// by any worker is rethrown on the caller's thread.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t w =
      std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = n * t / w;
    const std::size_t hi = n * (t + 1) / w;
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace ep1d::detail

#endif
