#include <random>

#include <benchmark/benchmark.h>

#include "bfgsadmm/bfgs.hpp"
#include "bfgsadmm/data.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/solver.hpp"
#include "bfgsadmm/synthetic.hpp"

using namespace bfgsadmm;

namespace {

Eigen::VectorXd random_vector(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = normal(rng);
  return v;
}

void bm_bfgs_update(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd a = random_spd(d, 10.0, 2);
  LocalCurvature c = LocalCurvature::scaled_identity(d, 1.0);
  for (auto _ : state) {
    const Eigen::VectorXd s = random_vector(d, rng);
    benchmark::DoNotOptimize(bfgs_inverse_update(c, s, a * s));
  }
}
BENCHMARK(bm_bfgs_update)->Arg(3)->Arg(10)->Arg(50);

void bm_assemble_h_inv(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  LocalCurvature c = LocalCurvature::scaled_identity(d, 1.0);
  c.b_inv = random_spd(d, 10.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_local_h_inv(c, 4, false, 1.0, 1.0, 0.5));
}
BENCHMARK(bm_assemble_h_inv)->Arg(3)->Arg(10)->Arg(50);

void bm_solver_step(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const Dataset ds = skin_style_dataset(5000, 1);
  const Problem p = logistic_problem(take_and_partition(ds, 5000, 20, 2), 2e-6);
  const Topology t = build_random_binomial(20, 0.2, 7);
  SolverConfig c;
  c.method = method;
  c.mu1 = c.mu2 = 100.0;
  c.eps = 1e-5;
  SolverState s = initial_state(p, t, c);
  for (auto _ : state) s = step(s, p, t, c);
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(bm_solver_step)
    ->Arg(static_cast<int>(Method::kBfgsAdmm))
    ->Arg(static_cast<int>(Method::kFirstOrder))
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
