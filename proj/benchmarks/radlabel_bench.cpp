#include <benchmark/benchmark.h>

#include <algorithm>

#include "radlabel/deid.hpp"
#include "radlabel/pipeline.hpp"
#include "radlabel/stats.hpp"
#include "synthetic.hpp"

namespace {

using namespace radlabel;

Corpus corpus_of(std::size_t count) {
  Corpus c;
  c.reports = testing::generate_reports(count, 7, default_lexicon());
  std::sort(c.reports.begin(), c.reports.end(),
            [](const Report& a, const Report& b) { return a.report_id < b.report_id; });
  return c;
}

void BM_LabelCorpus(benchmark::State& state) {
  const Corpus c = corpus_of(1000);
  LabelOptions opts;
  opts.jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(label_corpus(c, default_lexicon(), opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_LabelCorpus)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ReplacerApply(benchmark::State& state) {
  const auto phi = testing::generate_phi_reports(200, 3, default_lexicon());
  Corpus c;
  for (const auto& p : phi) c.reports.push_back(p.report);
  const deid::PhiStore store = deid::first_pass(c, {});
  const deid::Replacer replacer(store);
  std::size_t bytes = 0;
  for (const auto& r : c.reports) bytes += r.text.size();
  for (auto _ : state) {
    for (const auto& r : c.reports) benchmark::DoNotOptimize(replacer.apply(r.text));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes));
  state.counters["variants"] = static_cast<double>(replacer.variant_count());
}
BENCHMARK(BM_ReplacerApply)->Unit(benchmark::kMillisecond);

void BM_ConfidenceInterval(benchmark::State& state) {
  stats::CiParams params;
  params.df_exact = state.range(0) != 0;
  std::size_t hits = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::confidence_interval(3678, 33, hits, params));
    hits = (hits + 1) % 34;
  }
}
BENCHMARK(BM_ConfidenceInterval)->Arg(0)->Arg(1);

}  // namespace

// The distro benchmark_main archive is built with a different LTO version.
BENCHMARK_MAIN();
