#include <benchmark/benchmark.h>

#include "qpfb/corpus.hpp"
#include "qpfb/workspace.hpp"

using namespace qpfb;

namespace {

const Workspace& example() {
  static const auto ws = load_example_workspace();
  return *ws;
}

Word word_of(const PresentationPtr& p, std::initializer_list<const char*> gens) {
  Word w;
  for (const char* g : gens) w.push_back(p->generator(g));
  return w;
}

void BM_NormalizeB1(benchmark::State& state) {
  auto p = example().algebra("B1");
  Word w;
  for (int i = 0; i < state.range(0); ++i) {
    w.push_back(p->generator("y"));
    w.push_back(p->generator("x*"));
    w.push_back(p->generator("x"));
  }
  for (auto _ : state) benchmark::DoNotOptimize(p->normal_form(w));
}
BENCHMARK(BM_NormalizeB1)->DenseRange(1, 4);

void BM_NormalizeSUnu2(benchmark::State& state) {
  auto p = example().algebra("SUnu2");
  Word w;
  for (int i = 0; i < state.range(0); ++i) {
    for (const char* g : {"gamma*", "alpha*", "gamma", "alpha"}) w.push_back(p->generator(g));
  }
  for (auto _ : state) benchmark::DoNotOptimize(p->normal_form(w));
}
BENCHMARK(BM_NormalizeSUnu2)->DenseRange(1, 3);

void BM_Coproduct(benchmark::State& state) {
  auto H = example().hopf("SUnu2");
  auto w = word_of(H->algebra(), {"alpha", "gamma", "alpha*"});
  for (auto _ : state) benchmark::DoNotOptimize(H->coproduct(w));
}
BENCHMARK(BM_Coproduct);

void BM_HopfAxioms(benchmark::State& state) {
  auto H = example().hopf("SUnu2");
  for (auto _ : state) benchmark::DoNotOptimize(check_hopf_axioms(*H, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_HopfAxioms)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ConvolutionPower(benchmark::State& state) {
  auto H = example().hopf("SUnu2");
  auto f = LinMap::power(LinMap::identity(H), static_cast<int>(state.range(0)));
  auto w = word_of(H->algebra(), {"alpha", "gamma"});
  for (auto _ : state) benchmark::DoNotOptimize(f->apply(w));
}
BENCHMARK(BM_ConvolutionPower)->DenseRange(1, 3);

void BM_VerifyGauge(benchmark::State& state) {
  auto t = GaugeTransformation::unchecked(example_family(example(), static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(verify_gauge(t, 2));
}
BENCHMARK(BM_VerifyGauge)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ParseCorpus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_example_workspace());
}
BENCHMARK(BM_ParseCorpus)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
