#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "papercad/pipeline.hpp"
#include "papercad/placement.hpp"

using namespace papercad;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(PAPERCAD_FIXTURE_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SeedGrid scattered_seeds(int side, int nets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, side - 1);
  SeedGrid s;
  static_cast<LabelGrid&>(s) = LabelGrid(GridSpec{side, side, 0.2}, kEmpty);
  for (int n = 0; n < nets; ++n) {
    const std::size_t c = s.grid.index(pos(rng), pos(rng));
    s.cells[c] = n;
    s.sources.push_back({n, "s" + std::to_string(n), {c}});
  }
  return s;
}

void BM_RgbLedPipeline(benchmark::State& state) {
  const Netlist n = parse_netlist_xml(fixture("rgb_led.xml"));
  const PlacementSet pl = load_placement(fixture("rgb_led.place"), n);
  const FootprintLibrary lib = FootprintLibrary::builtin();
  const Board board(BoardParams{100, 70, 2, state.range(0) / 100.0, 1.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(run_pad_pipeline(n, lib, pl, board));
}
BENCHMARK(BM_RgbLedPipeline)->Arg(40)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_GeodesicPartition(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const SeedGrid s = scattered_seeds(side, 16, 7);
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_partition(s));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_GeodesicPartition)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AutoPlace(benchmark::State& state) {
  const Netlist n = parse_netlist_xml(fixture("chain4.xml"));
  const FootprintLibrary lib = FootprintLibrary::builtin();
  const Board board;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(auto_place(n, lib, board, ++seed));
}
BENCHMARK(BM_AutoPlace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
