#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "pdfa/abstraction.hpp"
#include "pdfa/monotone.hpp"
#include "pdfa/parser.hpp"
#include "pdfa/prob_analysis.hpp"
#include "pdfa/semantics.hpp"

namespace {

using namespace pdfa;

Program load(const char* name) {
  std::ifstream in(std::string(PDFA_PROGRAMS_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_program(os.str());
}

void bm_kron(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  DenseMatrix a = DenseMatrix::identity(n);
  DenseMatrix b = DenseMatrix::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}
BENCHMARK(bm_kron)->Arg(4)->Arg(8)->Arg(16);

void bm_pseudo_inverse_classification(benchmark::State& state) {
  Abstraction abs = Abstraction::parity(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_inverse(abs.a));
}
BENCHMARK(bm_pseudo_inverse_classification)->Arg(100)->Arg(1000)->Arg(10000);

void bm_quality_table(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quality_table(n));
}
BENCHMARK(bm_quality_table)->Arg(100)->Arg(1000)->Arg(10000);

void bm_solve_lv(benchmark::State& state) {
  Program p = load("countprimes.pw");
  for (auto _ : state) benchmark::DoNotOptimize(solve_lv(p));
}
BENCHMARK(bm_solve_lv);

void bm_forward_running(benchmark::State& state) {
  Program p = load("running.pw");
  StateSpace ss(p.decls);
  Abstraction abs = parse_abstraction_spec("forgetful:z", ss);
  ProbVector rho0 = ProbVector::uniform(ss.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_prob_forward(p, rho0, abs));
}
BENCHMARK(bm_forward_running);

void bm_forward_countprimes(benchmark::State& state) {
  Program p = load("countprimes.pw");
  StateSpace ss(p.decls);
  Abstraction abs = parse_abstraction_spec("forgetful:p", ss);
  ProbVector rho0 = ProbVector::uniform(ss.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_prob_forward(p, rho0, abs));
}
BENCHMARK(bm_forward_countprimes);

void bm_monte_carlo(benchmark::State& state) {
  Program p = load("running.pw");
  ProbVector rho0 = ProbVector::uniform(64);
  auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_monte_carlo(p, rho0, trials, 42));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(bm_monte_carlo)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
