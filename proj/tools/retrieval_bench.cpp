// Benchmark: serial vs parallel cosine scoring over a synthetic corpus.
// The parallel kernel must produce bitwise-identical scores; the run
// aborts if it does not.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "factlens/embedding.hpp"
#include "factlens/scoring.hpp"

namespace {

std::vector<double> random_unit_rows(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> matrix(rows * dim);
  for (double& v : matrix) {
    v = gauss(rng);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      sq += matrix[r * dim + j] * matrix[r * dim + j];
    }
    double norm = std::sqrt(sq);
    for (std::size_t j = 0; j < dim; ++j) {
      matrix[r * dim + j] /= norm;
    }
  }
  return matrix;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t rows = 20000;
  std::size_t dim = 256;
  int repeats = 20;
  std::uint64_t seed = 42;

  CLI::App app{"cosine scoring kernel benchmark"};
  app.add_option("--rows", rows, "Corpus rows");
  app.add_option("--dim", dim, "Vector dimension");
  app.add_option("--repeats", repeats, "Timed repetitions");
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  std::vector<double> matrix = random_unit_rows(rows, dim, seed);
  std::vector<double> query = random_unit_rows(1, dim, seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<double> serial(rows);
  std::vector<double> parallel(rows);

  // Warm-up also doubles as the correctness gate.
  factlens::cosine_scores_serial(matrix, rows, dim, query, serial);
  factlens::cosine_scores_parallel(matrix, rows, dim, query, parallel);
  if (serial != parallel) {
    std::fprintf(stderr, "parallel kernel diverged from serial reference\n");
    return 1;
  }

  double serial_ms = 0.0;
  for (int i = 0; i < repeats; ++i) {
    auto start = Clock::now();
    factlens::cosine_scores_serial(matrix, rows, dim, query, serial);
    volatile double sink = serial[0];
    (void)sink;
    serial_ms += ms_since(start);
  }

  double parallel_ms = 0.0;
  for (int i = 0; i < repeats; ++i) {
    auto start = Clock::now();
    factlens::cosine_scores_parallel(matrix, rows, dim, query, parallel);
    volatile double sink = parallel[0];
    (void)sink;
    parallel_ms += ms_since(start);
  }

  serial_ms /= repeats;
  parallel_ms /= repeats;
  std::printf("rows=%zu dim=%zu repeats=%d\n", rows, dim, repeats);
  std::printf("serial    %10.3f ms/query\n", serial_ms);
  std::printf("parallel  %10.3f ms/query\n", parallel_ms);
  std::printf("speedup   %10.2fx\n", serial_ms / parallel_ms);
  return 0;
}
