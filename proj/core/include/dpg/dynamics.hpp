#pragma once

// Coupled evolution of the social state: d+ = d P(pi, d) and the inertial
// logit policy update, plus trajectory metrics.

#include "dpg/core.hpp"
#include "dpg/decision.hpp"
#include "dpg/epidemic.hpp"
#include "dpg/scenarios.hpp"

#include <span>
#include <vector>

namespace dpg {

struct StepRecord {
    int day = 0;
    SocialState state;
    ActivityMasses activity;
    /// Mean activation degree of each policy row, (class, zone) flattened class-major.
    std::vector<double> mean_activation;
    /// Mass moving from zone i to zone j (i != j) this day, at [i * Z + j]; diagonal is 0.
    std::vector<double> migration_flow;
    /// Population-mean expected reward, sum d[s,z] R[s,z](pi).
    double welfare = 0.0;

    double mean_degree(BehaviorClass c, int zone) const
    {
        return mean_activation[rank(c) * static_cast<std::size_t>(state.dims().num_zones()) +
                               static_cast<std::size_t>(zone)];
    }
    double flow(int from, int to) const
    {
        return migration_flow[static_cast<std::size_t>(from) * static_cast<std::size_t>(state.dims().num_zones()) +
                              static_cast<std::size_t>(to)];
    }
};

StepRecord make_record(int day, const SocialState& social, const GameModel& model);

struct Trajectory {
    std::vector<StepRecord> records;

    /// Series of d[s, zone] over the stored days.
    std::vector<double> series(InfectionState s, int zone) const;
    /// Series of sum_z d[s, z].
    std::vector<double> series(InfectionState s) const;
};

struct WaveReport {
    bool second_wave = false;
    /// Indices (days) of the accepted wave peaks, in time order.
    std::vector<int> peak_days;
};

struct EpidemicMetrics {
    double total_infections = 0.0;
    std::vector<double> total_infections_by_zone;
    double peak_infections = 0.0;
    std::vector<double> peak_infections_by_zone;
    int peak_day = 0;
    std::vector<int> peak_day_by_zone;
    double average_welfare = 0.0;
    std::vector<bool> second_wave_by_zone;
    int days = 0; ///< number of stored days
};

/// A step with its intermediate quantities.
struct StepOutcome {
    SocialState next;
    /// d P before renormalization into a StateDistribution.
    std::vector<double> raw_next_mass;
    double policy_change = 0.0; ///< sup norm of pi+ - pi
    double bellman_residual = 0.0;
};

/// Computes kernel, V, Q and the logit target at the pre-step state, and
/// updates pi and d simultaneously from it.
StepOutcome advance(const SocialState& social, const GameModel& model);
SocialState step(const SocialState& social, const GameModel& model);

struct SimulationResult {
    Trajectory trajectory;
    EpidemicMetrics metrics;
    bool stopped_early = false;
    double max_mass_deviation = 0.0; ///< max over steps of |sum(d P) - 1|
};

SimulationResult simulate(const GameModel& model, SocialState initial, const StoppingRule& stopping,
                          const MetricsOptions& options = {});
/// Throws ValidationError for an invalid scenario (including horizon <= 0).
SimulationResult simulate(const ScenarioConfig& scenario);

/// Throws ValidationError for an empty trajectory.
EpidemicMetrics metrics(const Trajectory& traj, const MetricsOptions& options = {});

/// True iff the series has two wave peaks separated by a trough at least
/// `prominence` below both.
WaveReport detect_second_wave(std::span<const double> series, double prominence = 0.01);
/// Applied to the symptomatic mass d[I, zone].
WaveReport detect_second_wave(const Trajectory& traj, int zone, double prominence = 0.01);

} // namespace dpg
