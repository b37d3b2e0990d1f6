#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace strsub::detail {

// Splits [0, count) into contiguous chunks, runs body(acc, begin, end) on
// each chunk with its own accumulator, then folds the accumulators in chunk
// order with merge(into, from). When merge keeps the earlier operand on ties
// the result does not depend on the number of workers.
template <class Acc, class Body, class Merge>
Acc parallel_fold(std::uint64_t count, unsigned threads, const Acc& init,
                  Body body, Merge merge) {
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count));
  if (workers == 1) {
    Acc acc = init;
    if (count > 0) body(acc, std::uint64_t{0}, count);
    return acc;
  }

  std::vector<Acc> partial(workers, init);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = count * w / workers;
      const std::uint64_t end = count * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          body(partial[w], begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Acc acc = std::move(partial[0]);
  for (std::uint64_t w = 1; w < workers; ++w) merge(acc, std::move(partial[w]));
  return acc;
}

}  // namespace strsub::detail
