#include <benchmark/benchmark.h>

#include "zmlt/io.hpp"
#include "zmlt/pipeline.hpp"
#include "zmlt/steiner.hpp"

#include "random_graph.hpp"

namespace {

const std::vector<double> kLevels{20, 50, 100};
const std::vector<double> kFonts{30, 25, 20};

void BM_ExtractHierarchy(benchmark::State& state) {
  const auto g = zmlt::testing::preferential_graph(1, static_cast<int>(state.range(0)));
  const auto f = zmlt::build_filtration(g, kLevels);
  for (auto _ : state) benchmark::DoNotOptimize(zmlt::extract_hierarchy(g, f));
}

void BM_RunPipeline(benchmark::State& state) {
  const auto g = zmlt::testing::preferential_graph(1, static_cast<int>(state.range(0)));
  const auto h = zmlt::extract_hierarchy(g, zmlt::build_filtration(g, kLevels));
  const auto boxes = zmlt::assign_font_sizes(g, h.filtration, kFonts);
  zmlt::RunConfig cfg;
  zmlt::fit_force_to_labels(cfg, zmlt::mean_first_level_label_width(h, boxes));
  for (auto _ : state) benchmark::DoNotOptimize(zmlt::run_pipeline(g, h, boxes, cfg.force));
}

}  // namespace

BENCHMARK(BM_ExtractHierarchy)->Arg(100)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunPipeline)->Arg(60)->Arg(150)->Unit(benchmark::kMillisecond);
