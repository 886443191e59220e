// Serial reference vs OpenMP sweep on the same grids.
#include <benchmark/benchmark.h>

#include "thermofid/lmg.hpp"
#include "thermofid/models.hpp"
#include "thermofid/scan.hpp"

using namespace thermofid;

namespace {

const scan::FieldKind kFields[] = {scan::FieldKind::F_beta, scan::FieldKind::Cv,
                                   scan::FieldKind::chi};

scan::ScanGrid grid() {
  return {scan::uniform_axis(0.1, 1.0, 0.1), scan::uniform_axis(0.1, 2.0, 0.02), 1e-3,
          std::nullopt};
}

template <class Model>
void run(benchmark::State& state, const Model& m, bool parallel) {
  const auto g = grid();
  for (auto _ : state) {
    auto out = parallel ? scan::sweep(m, g, kFields, Execution::Parallel)
                        : scan::sweep_serial(m, g, kFields);
    benchmark::DoNotOptimize(out);
  }
  state.counters["cells"] = double(g.lambda_axis.size() * g.t_axis.size());
}

void BM_TimSerial(benchmark::State& s) { run(s, models::Tim1DModel({1.0, 1.0}), false); }
void BM_TimParallel(benchmark::State& s) { run(s, models::Tim1DModel({1.0, 1.0}), true); }
void BM_LmgSerial(benchmark::State& s) {
  run(s, lmg::LmgModel(int(s.range(0)), 0.2, lmg::Sectors::All), false);
}
void BM_LmgParallel(benchmark::State& s) {
  run(s, lmg::LmgModel(int(s.range(0)), 0.2, lmg::Sectors::All), true);
}

}  // namespace

BENCHMARK(BM_TimSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TimParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LmgSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LmgParallel)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
