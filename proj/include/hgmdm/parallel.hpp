#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hgmdm {

/// Worker count: hardware concurrency capped by the HGMDM_THREADS environment
/// variable (unset or invalid means no cap).
unsigned thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// written to caller-owned slots so reductions stay in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Fixed pairwise-tree sum. The tree shape depends only on values.size(), so
/// the result does not depend on how the values were produced.
template <class T>
T pairwise_sum(const std::vector<T>& values) {
  if (values.empty()) return T{};
  std::vector<T> level = values;
  while (level.size() > 1) {
    std::vector<T> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next[i / 2] = level[i] + level[i + 1];
    if (level.size() % 2 == 1) next.back() = level.back();
    level.swap(next);
  }
  return level.front();
}

}  // namespace hgmdm
