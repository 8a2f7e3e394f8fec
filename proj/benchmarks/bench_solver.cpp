#include "krein/contraction_face.hpp"
#include "krein/krein_solver.hpp"
#include "krein/lp.hpp"
#include "krein/matrix_order.hpp"
#include "krein/oracle.hpp"
#include "krein/random.hpp"
#include "krein/te_cone.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace krein;

Eigen::MatrixXd positive_matrix(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.uniform_vector(n * n, 0.01, 1.0).reshaped(n, n);
}

void BM_FixedPointOrthant(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PositiveOperator op = make_positive_operator(positive_matrix(n, 1), make_orthant(n),
                                                     Eigen::VectorXd::Ones(n), Norm::linf());
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual_eigenvector(op));
}
BENCHMARK(BM_FixedPointOrthant)->RangeMultiplier(2)->Range(4, 64);

void BM_DenseFallbackOrthant(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PositiveOperator op = make_positive_operator(positive_matrix(n, 2), make_orthant(n),
                                                     Eigen::VectorXd::Ones(n), Norm::linf());
  SolverOptions opts;
  opts.fallback = Fallback::Always;
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual_eigenvector(op, opts));
}
BENCHMARK(BM_DenseFallbackOrthant)->RangeMultiplier(2)->Range(4, 64);

void BM_CommonEigenvector(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd t = positive_matrix(n, 3);
  const auto op = [&](const Eigen::MatrixXd& m) {
    return make_positive_operator(m, make_orthant(n), Eigen::VectorXd::Ones(n), Norm::linf());
  };
  const CommutingFamily fam{{op(t), op(t * t + t)}};
  for (auto _ : state) benchmark::DoNotOptimize(common_eigenvector(fam));
}
BENCHMARK(BM_CommonEigenvector)->Arg(4)->Arg(16)->Arg(32);

void BM_TeMembership(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(4);
  Eigen::VectorXd e = rng.uniform_vector(n, 0.2, 1.0);
  e /= e.lpNorm<Eigen::Infinity>();
  const TeDual dual = build_te_dual(e, Norm::linf());
  const Eigen::VectorXd x = rng.gaussian_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(te_membership(x, dual));
}
BENCHMARK(BM_TeMembership)->Arg(2)->Arg(4)->Arg(6);

void BM_SimplexRandomLp(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(5);
  lp::LinearProgram prog(n);
  prog.set_objective(-rng.uniform_vector(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    prog.add_constraint(rng.uniform_vector(n).transpose(), lp::Relation::LessEqual, 1.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(prog.solve());
}
BENCHMARK(BM_SimplexRandomLp)->RangeMultiplier(2)->Range(4, 32);

void BM_FixedState(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(6);
  const SuperOp phi = superop_from_kraus({rng.complex_gaussian_matrix(n, n), rng.complex_gaussian_matrix(n, n)});
  for (auto _ : state) benchmark::DoNotOptimize(fixed_state(phi));
}
BENCHMARK(BM_FixedState)->Arg(2)->Arg(4)->Arg(6);

void BM_DenseDualEigs(benchmark::State& state) {
  const Eigen::MatrixXd t = positive_matrix(state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::dense_dual_eigs(t));
}
BENCHMARK(BM_DenseDualEigs)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
