#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace factlens {

// Dense cosine scoring kernels. `matrix` is row-major, n rows of d
// doubles. Both kernels accumulate each row's dot product in index
// order, so their outputs are bitwise identical; the parallel kernel
// only distributes whole rows across threads.
void cosine_scores_serial(std::span<const double> matrix, std::size_t n, std::size_t d,
                          std::span<const double> query, std::span<double> out);

// OpenMP over rows when built with OpenMP; falls back to the serial
// kernel otherwise.
void cosine_scores_parallel(std::span<const double> matrix, std::size_t n, std::size_t d,
                            std::span<const double> query, std::span<double> out);

// Indices of the k best scores, ordered by score descending with ties
// broken by id ascending. k may exceed n.
std::vector<std::size_t> top_k_indices(std::span<const double> scores,
                                       std::span<const std::string> ids, std::size_t k);

}  // namespace factlens
