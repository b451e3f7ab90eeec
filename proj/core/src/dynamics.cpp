#include "dpg/dynamics.hpp"

#include "dpg/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dpg {

StepRecord make_record(int day, const SocialState& social, const GameModel& model)
{
    const auto& dims = social.dims();
    const auto zones = static_cast<std::size_t>(dims.num_zones());
    StepRecord rec{day, social, activity_masses(social, model.params), {}, std::vector<double>(zones * zones, 0.0),
                   0.0};

    rec.mean_activation.reserve(kNumBehaviorClasses * zones);
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            rec.mean_activation.push_back(social.policy.mean_degree(c, z));
        }
    }
    for (int from = 0; from < dims.num_zones(); ++from) {
        for (int to = 0; to < dims.num_zones(); ++to) {
            if (from == to) {
                continue;
            }
            double moved = 0.0;
            for (auto s : kAllInfectionStates) {
                moved += social.dist(s, from) * social.policy.move_probability(behavior_class(s), from, to);
            }
            rec.migration_flow[static_cast<std::size_t>(from) * zones + static_cast<std::size_t>(to)] = moved;
        }
    }
    const auto reward = expected_reward(social.policy, model.rewards);
    const auto mass = social.dist.values();
    rec.welfare = std::inner_product(mass.begin(), mass.end(), reward.begin(), 0.0);
    return rec;
}

std::vector<double> Trajectory::series(InfectionState s, int zone) const
{
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        out.push_back(rec.state.dist(s, zone));
    }
    return out;
}

std::vector<double> Trajectory::series(InfectionState s) const
{
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        out.push_back(rec.state.dist.state_mass(s));
    }
    return out;
}

StepOutcome advance(const SocialState& social, const GameModel& model)
{
    const auto& p = model.params;
    const auto kernel = transition_matrix(social, p);
    const auto reward = expected_reward(social.policy, model.rewards);
    const auto value = value_function(social, kernel, reward, p);
    const auto q = q_function(social, value, model.rewards, p);
    const auto target = logit_choice(q, social.dist, p, model.rules);
    Policy next_policy = policy_update(social.policy, target, p.eta);

    double change = 0.0;
    const auto before = social.policy.values();
    const auto after = next_policy.values();
    for (std::size_t i = 0; i < before.size(); ++i) {
        change = std::max(change, std::abs(after[i] - before[i]));
    }

    auto raw = kernel.propagate(social.dist);
    StateDistribution next_dist(social.dims(), raw);
    return StepOutcome{SocialState(std::move(next_policy), std::move(next_dist)), std::move(raw), change,
                       bellman_residual(kernel, reward, value, p.alpha)};
}

SocialState step(const SocialState& social, const GameModel& model)
{
    return advance(social, model).next;
}

SimulationResult simulate(const GameModel& model, SocialState initial, const StoppingRule& stopping,
                          const MetricsOptions& options)
{
    if (stopping.horizon <= 0) {
        throw ValidationError("horizon must be positive");
    }
    SimulationResult result;
    auto& records = result.trajectory.records;
    records.reserve(static_cast<std::size_t>(std::min(stopping.horizon, 4096)) + 1);
    records.push_back(make_record(0, initial, model));

    SocialState state = std::move(initial);
    for (int day = 1; day <= stopping.horizon; ++day) {
        auto outcome = advance(state, model);
        const double mass = std::accumulate(outcome.raw_next_mass.begin(), outcome.raw_next_mass.end(), 0.0);
        result.max_mass_deviation = std::max(result.max_mass_deviation, std::abs(mass - 1.0));
        state = std::move(outcome.next);
        records.push_back(make_record(day, state, model));

        const double active = state.dist.state_mass(InfectionState::A) + state.dist.state_mass(InfectionState::I);
        if (stopping.early_stop && active < stopping.extinction_threshold &&
            outcome.policy_change < stopping.policy_tolerance) {
            result.stopped_early = true;
            break;
        }
    }
    result.metrics = metrics(result.trajectory, options);
    return result;
}

SimulationResult simulate(const ScenarioConfig& scenario)
{
    const auto cfg = validate_scenario(scenario);
    return simulate(build_model(cfg), initial_social_state(cfg), cfg.stopping, cfg.metrics);
}

EpidemicMetrics metrics(const Trajectory& traj, const MetricsOptions& options)
{
    if (traj.records.empty()) {
        throw ValidationError("metrics need a nonempty trajectory");
    }
    const auto& first = traj.records.front().state.dist;
    const auto& last = traj.records.back().state.dist;
    const int zones = first.dims().num_zones();

    EpidemicMetrics m;
    m.days = static_cast<int>(traj.records.size());
    for (int z = 0; z < zones; ++z) {
        double total = last(InfectionState::R, z) + last(InfectionState::U, z);
        if (options.subtract_initial_immunity) {
            total -= first(InfectionState::R, z) + first(InfectionState::U, z);
        }
        m.total_infections_by_zone.push_back(total);
        m.total_infections += total;

        const auto series = traj.series(InfectionState::I, z);
        const auto peak = std::max_element(series.begin(), series.end());
        m.peak_infections_by_zone.push_back(*peak);
        m.peak_day_by_zone.push_back(traj.records[static_cast<std::size_t>(peak - series.begin())].day);
        m.second_wave_by_zone.push_back(detect_second_wave(series, options.wave_prominence).second_wave);
    }
    const auto global = traj.series(InfectionState::I);
    const auto peak = std::max_element(global.begin(), global.end());
    m.peak_infections = *peak;
    m.peak_day = traj.records[static_cast<std::size_t>(peak - global.begin())].day;

    double welfare = 0.0;
    for (const auto& rec : traj.records) {
        welfare += rec.welfare;
    }
    m.average_welfare = welfare / static_cast<double>(traj.records.size());
    return m;
}

WaveReport detect_second_wave(std::span<const double> x, double prominence)
{
    WaveReport report;
    const std::size_t n = x.size();
    double trough = std::numeric_limits<double>::infinity(); // lowest value since the last wave peak
    for (std::size_t i = 0; i < n; ++i) {
        const bool local_max = (i == 0 || x[i] > x[i - 1]) && (i + 1 == n || x[i] >= x[i + 1]);
        if (local_max) {
            if (report.peak_days.empty()) {
                report.peak_days.push_back(static_cast<int>(i));
                trough = std::numeric_limits<double>::infinity();
            } else {
                const double last = x[static_cast<std::size_t>(report.peak_days.back())];
                if (last - trough >= prominence && x[i] - trough >= prominence) {
                    report.peak_days.push_back(static_cast<int>(i));
                    trough = std::numeric_limits<double>::infinity();
                } else if (x[i] > last) {
                    report.peak_days.back() = static_cast<int>(i);
                    trough = std::numeric_limits<double>::infinity();
                }
            }
        }
        trough = std::min(trough, x[i]);
    }
    report.second_wave = report.peak_days.size() >= 2;
    return report;
}

WaveReport detect_second_wave(const Trajectory& traj, int zone, double prominence)
{
    const auto series = traj.series(InfectionState::I, zone);
    WaveReport report = detect_second_wave(series, prominence);
    for (int& idx : report.peak_days) {
        idx = traj.records[static_cast<std::size_t>(idx)].day;
    }
    return report;
}

} // namespace dpg
