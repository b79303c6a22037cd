#include "factlens/scoring.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace factlens {

void cosine_scores_serial(std::span<const double> matrix, std::size_t n, std::size_t d,
                          std::span<const double> query, std::span<double> out) {
  assert(matrix.size() == n * d);
  assert(query.size() == d);
  assert(out.size() == n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = matrix.data() + r * d;
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      acc += row[c] * query[c];
    }
    out[r] = acc;
  }
}

void cosine_scores_parallel(std::span<const double> matrix, std::size_t n, std::size_t d,
                            std::span<const double> query, std::span<double> out) {
#ifdef _OPENMP
  assert(matrix.size() == n * d);
  assert(query.size() == d);
  assert(out.size() == n);
  // row-private accumulation in index order: same rounding as serial
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
    const double* row = matrix.data() + static_cast<std::size_t>(r) * d;
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      acc += row[c] * query[c];
    }
    out[static_cast<std::size_t>(r)] = acc;
  }
#else
  cosine_scores_serial(matrix, n, d, query, out);
#endif
}

std::vector<std::size_t> top_k_indices(std::span<const double> scores,
                                       std::span<const std::string> ids, std::size_t k) {
  assert(scores.size() == ids.size());
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) {
      return scores[a] > scores[b];
    }
    return ids[a] < ids[b];
  };
  if (k >= idx.size()) {
    std::sort(idx.begin(), idx.end(), better);
    return idx;
  }
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    better);
  idx.resize(k);
  return idx;
}

}  // namespace factlens
