// Serial reference vs OpenMP kernels: batch prediction over instances and
// the finite-difference gradient oracle.
//
//   memnet_bench [instances=3608] [dim=300] [hops=3] [threads=0 (OpenMP default)]

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "memnet/eval.hpp"
#include "memnet/synthetic.hpp"
#include "memnet/train.hpp"

namespace {

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t arg(int argc, char** argv, int i, std::size_t fallback) {
  return argc > i ? static_cast<std::size_t>(std::stoul(argv[i])) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace memnet;
  const std::size_t n = arg(argc, argv, 1, 3608);
  const std::size_t dim = arg(argc, argv, 2, 300);
  const std::size_t hops = arg(argc, argv, 3, 3);
  const std::size_t threads = arg(argc, argv, 4, 0);
  if (threads) omp_set_num_threads(static_cast<int>(threads));

  auto corpus = make_synthetic_corpus(n, 5000, dim, 7);
  const auto encoded = encode_all(corpus.instances, corpus.table);
  ModelConfig model{.dim = dim, .hops = hops, .mode = LocationMode::Model2};
  const auto params = init_params(model, 7);

  std::cout << "threads: " << omp_get_max_threads() << ", instances: " << n << ", d=" << dim
            << ", hops=" << hops << '\n';

  std::vector<Polarity> serial, parallel;
  const double t_serial =
      seconds([&] { serial = predict_all_serial(encoded, corpus.table, model, params); });
  const double t_parallel =
      seconds([&] { parallel = predict_all(encoded, corpus.table, model, params); });
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "predict  serial " << t_serial << "s  openmp " << t_parallel << "s  speedup "
            << t_serial / t_parallel << "  identical=" << (serial == parallel) << '\n';

  // The oracle is O(parameters) forward passes, so use a small model.
  auto small = make_synthetic_corpus(4, 50, 16, 9);
  const auto small_enc = encode_all(small.instances, small.table);
  ModelConfig small_model{.dim = 16, .hops = 3, .mode = LocationMode::Model4, .max_len = 32};
  const auto small_params = init_params(small_model, 9);
  Gradients g_serial, g_parallel;
  const double fd_serial = seconds([&] {
    g_serial = numerical_gradient_serial(small_enc[0], small.table, small_model, small_params);
  });
  const double fd_parallel = seconds([&] {
    g_parallel = numerical_gradient(small_enc[0], small.table, small_model, small_params);
  });
  std::cout << "fd-grad  serial " << fd_serial << "s  openmp " << fd_parallel << "s  speedup "
            << fd_serial / fd_parallel << "  identical=" << (g_serial == g_parallel) << '\n';
  return (serial == parallel && g_serial == g_parallel) ? EXIT_SUCCESS : EXIT_FAILURE;
}
