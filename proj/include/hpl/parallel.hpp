#ifndef HPL_PARALLEL_HPP
#define HPL_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace hpl {

/// Evaluates fn(0..n-1) on up to `jobs` threads; results come back in index
/// order so output does not depend on scheduling.
template <class T>
std::vector<T> parallel_map(size_t n, int jobs, const std::function<T(size_t)>& fn) {
  std::vector<T> out(n);
  size_t workers = std::min<size_t>(std::max(jobs, 1), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hpl

#endif  // HPL_PARALLEL_HPP
