#include <benchmark/benchmark.h>
#include <omp.h>

#include "satqkd/pdt_sampler.hpp"
#include "satqkd/scenario.hpp"

namespace {

satqkd::LinkModel model(const char* preset, double zenith_deg) {
  auto s = satqkd::link_preset(preset);
  s.zenith_angle = satqkd::deg_to_rad(zenith_deg);
  return satqkd::build_link_model(s, satqkd::weather_preset("night1"));
}

void BM_SampleSerial(benchmark::State& state, const char* preset) {
  const auto m = model(preset, 30.0);
  satqkd::SamplerOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(satqkd::sample_pdt_serial(m.distribution, m.aperture, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleParallel(benchmark::State& state, const char* preset) {
  const auto m = model(preset, 30.0);
  satqkd::SamplerOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(satqkd::sample_pdt(m.distribution, m.aperture, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_SweepParallel(benchmark::State& state) {
  const auto s = satqkd::link_preset("micius-down");
  std::vector<double> z;
  for (int d = 0; d <= 80; d += 5) z.push_back(satqkd::deg_to_rad(d));
  satqkd::SamplerOptions opts;
  opts.samples = 1000;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        satqkd::sweep_mean_transmittance(s, satqkd::weather_preset("night1"), z, opts));
}

}  // namespace

BENCHMARK_CAPTURE(BM_SampleSerial, downlink, "micius-down")->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SampleParallel, downlink, "micius-down")->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SampleSerial, uplink, "micius-up")->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SampleParallel, uplink, "micius-up")->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
