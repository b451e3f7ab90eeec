#include "dpg/dynamics.hpp"
#include "dpg/rewards.hpp"
#include "dpg/scenarios.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dpg;

// fig4 parameters stretched over `zones` equally sized zones
ScenarioConfig zones_scenario(int zones)
{
    auto cfg = preset("fig4_migration");
    cfg.params.num_zones = zones;
    const auto n = static_cast<std::size_t>(zones);
    cfg.lockdown.healthy.assign(n, cfg.params.a_max);
    cfg.lockdown.infected.assign(n, cfg.params.a_max);
    cfg.lockdown.recovered.assign(n, cfg.params.a_max);
    cfg.initial_distribution = seeded_distribution(std::vector<double>(n, 1.0 / zones));
    return validate_scenario(std::move(cfg));
}

void BM_TransitionMatrix(benchmark::State& state)
{
    const auto cfg = zones_scenario(static_cast<int>(state.range(0)));
    const auto social = initial_social_state(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transition_matrix(social, cfg.params));
    }
}
BENCHMARK(BM_TransitionMatrix)->RangeMultiplier(2)->Range(1, 16);

void BM_ValueSolve(benchmark::State& state)
{
    const auto cfg = zones_scenario(static_cast<int>(state.range(0)));
    const auto model = build_model(cfg);
    const auto social = initial_social_state(cfg);
    const auto kernel = transition_matrix(social, cfg.params);
    const auto reward = expected_reward(social.policy, model.rewards);
    for (auto _ : state) {
        benchmark::DoNotOptimize(value_function(social, kernel, reward, cfg.params));
    }
}
BENCHMARK(BM_ValueSolve)->RangeMultiplier(2)->Range(1, 16);

void BM_Step(benchmark::State& state)
{
    const auto cfg = zones_scenario(static_cast<int>(state.range(0)));
    const auto model = build_model(cfg);
    const auto social = initial_social_state(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(social, model));
    }
}
BENCHMARK(BM_Step)->RangeMultiplier(2)->Range(1, 16);

void BM_SimulatePreset(benchmark::State& state, const char* name)
{
    const auto cfg = preset(name);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(cfg));
    }
}
BENCHMARK_CAPTURE(BM_SimulatePreset, fig2a, "fig2a")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulatePreset, fig4_migration, "fig4_migration")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
