#include "dpg/dynamics.hpp"

#include "dpg/equilibrium.hpp"
#include "random_state.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace dpg;

namespace {

StepRecord hand_record(int day, const Dimensions& dims, std::vector<double> mass, double welfare)
{
    ModelParams p;
    p.num_zones = dims.num_zones();
    p.a_max = dims.a_max();
    return StepRecord{day, SocialState(uniform_no_move_policy(p), StateDistribution(dims, std::move(mass))), {}, {}, {},
                      welfare};
}

} // namespace

TEST_CASE("metrics of a hand-built three-day trajectory")
{
    const Dimensions dims(2, 1);
    Trajectory t;
    //                        S    A    I    R    U  | S    A    I    R    U
    t.records.push_back(hand_record(0, dims, {0.5, 0.1, 0.0, 0.0, 0.0, 0.3, 0.0, 0.1, 0.0, 0.0}, 1.0));
    t.records.push_back(hand_record(1, dims, {0.3, 0.1, 0.2, 0.0, 0.1, 0.2, 0.0, 0.05, 0.05, 0.0}, 2.0));
    t.records.push_back(hand_record(2, dims, {0.3, 0.0, 0.1, 0.1, 0.2, 0.15, 0.0, 0.05, 0.1, 0.0}, 6.0));

    const auto m = metrics(t);
    CHECK(m.days == 3);
    CHECK(m.total_infections_by_zone[0] == doctest::Approx(0.3));
    CHECK(m.total_infections_by_zone[1] == doctest::Approx(0.1));
    CHECK(m.total_infections == doctest::Approx(0.4));
    CHECK(m.peak_infections_by_zone[0] == doctest::Approx(0.2));
    CHECK(m.peak_day_by_zone[0] == 1);
    CHECK(m.peak_infections_by_zone[1] == doctest::Approx(0.1));
    CHECK(m.peak_day_by_zone[1] == 0);
    CHECK(m.peak_infections == doctest::Approx(0.25));
    CHECK(m.peak_day == 1);
    CHECK(m.average_welfare == doctest::Approx(3.0));

    t.records[0] = hand_record(0, dims, {0.5, 0.0, 0.0, 0.05, 0.05, 0.3, 0.0, 0.1, 0.0, 0.0}, 1.0);
    const auto net = metrics(t, {.subtract_initial_immunity = true});
    CHECK(net.total_infections_by_zone[0] == doctest::Approx(0.2));

    CHECK_THROWS_AS(metrics(Trajectory{}), ValidationError);
}

TEST_CASE("constant trajectory has the instantaneous welfare")
{
    const Dimensions dims(1, 2);
    Trajectory t;
    for (int day = 0; day < 4; ++day) {
        t.records.push_back(hand_record(day, dims, {0.7, 0, 0, 0.3, 0}, 0.625));
    }
    CHECK(metrics(t).average_welfare == 0.625);
}

TEST_CASE("step is a simultaneous update from the pre-step state")
{
    testing::Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = testing::random_params(rng);
        const Dimensions dims(p);
        const GameModel model{p, testing::random_rewards(p, rng), ChoiceRules::unrestricted()};
        const auto social = testing::random_social_state(dims, rng);

        const auto kernel = transition_matrix(social, p);
        const auto R = expected_reward(social.policy, model.rewards);
        const auto V = value_function(social, kernel, R, p);
        const auto target = logit_choice(q_function(social, V, model.rewards, p), social.dist, p, model.rules);
        const auto expected_pi = policy_update(social.policy, target, p.eta);
        const auto expected_d = kernel.propagate(social.dist);

        const auto next = step(social, model);
        for (std::size_t i = 0; i < expected_d.size(); ++i) {
            CHECK(next.dist.values()[i] == doctest::Approx(expected_d[i]).epsilon(1e-14));
        }
        CHECK(next.policy == expected_pi);
    }
}

TEST_CASE("first day of the single-zone scenario creates asymptomatic mass")
{
    const auto cfg = preset("fig2a");
    const auto out = advance(initial_social_state(cfg), build_model(cfg));
    CHECK(out.next.dist(InfectionState::A, 0) > 0.02);
}

TEST_CASE("recovered-only population does not change infection state")
{
    ModelParams p;
    p.num_zones = 2;
    p.alpha = 0.9;
    p.c_mig = 0.1;
    const Dimensions dims(p);
    const auto o = linear_benefit(6);
    const GameModel model{p, {o, lockdown_cost(LockdownLevels(dims, {2, 2, 2, 2, 6, 6}), o), p.c_mig, p.c_dis}, {}};
    const SocialState start(uniform_no_move_policy(p), StateDistribution(dims, {0, 0, 0, 0.6, 0, 0, 0, 0, 0.4, 0}));
    const auto next = step(start, model);
    CHECK(next.dist.state_mass(InfectionState::R) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(next.dist.state_mass(InfectionState::A) == 0.0);
    CHECK(next.dist.state_mass(InfectionState::I) == 0.0);
}

TEST_CASE("constructed equilibrium is a fixed point of the nearly rational dynamics")
{
    auto cfg = preset("fig4_migration");
    cfg.params.lambda = 1e6;
    const auto model = build_model(cfg);
    const auto zc = classify_zones(model.rewards, cfg.params);
    const Dimensions dims(cfg.params);
    std::vector<double> mass(dims.num_states(), 0.0);
    mass[dims.state_index(InfectionState::S, 0)] = 0.6;
    mass[dims.state_index(InfectionState::R, 0)] = 0.3;
    mass[dims.state_index(InfectionState::R, 1)] = 0.1;
    const auto eq = construct_equilibrium(zc, mass, model.rules);
    REQUIRE(check_equilibrium(eq, model, 1e-8).verdict);
    const auto next = step(eq, model);
    for (std::size_t i = 0; i < mass.size(); ++i) {
        CHECK(std::abs(next.dist.values()[i] - eq.dist.values()[i]) < 1e-8);
    }
}

TEST_CASE("simulation invariants on random scenarios")
{
    testing::Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = testing::random_params(rng, 2);
        p.delta_U_R = std::max(p.delta_U_R, 0.01);
        const Dimensions dims(p);
        const GameModel model{p, testing::random_rewards(p, rng), ChoiceRules{}};
        SocialState start(project_to_feasible(uniform_no_move_policy(p), model.rules),
                          testing::random_distribution(dims, rng));
        const auto res = simulate(model, start, {.horizon = 300});
        CHECK(res.max_mass_deviation < 1e-10);
        double last_ru = -1.0, last_r = -1.0;
        for (std::size_t k = 0; k < res.trajectory.records.size(); ++k) {
            const auto& rec = res.trajectory.records[k];
            CHECK(rec.day == static_cast<int>(k));
            const auto& d = rec.state.dist;
            const double r = d.state_mass(InfectionState::R);
            const double ru = r + d.state_mass(InfectionState::U);
            CHECK(ru >= last_ru - 1e-15);
            CHECK(r >= last_r - 1e-15);
            last_ru = ru;
            last_r = r;
            const auto v = d.values();
            CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("zero infections give a flat epidemic")
{
    auto cfg = preset("fig2a");
    cfg.initial_distribution = {1.0, 0.0, 0.0, 0.0, 0.0};
    cfg.stopping.horizon = 50;
    const auto res = simulate(cfg);
    CHECK(res.metrics.total_infections == 0.0);
    CHECK(res.metrics.peak_infections == 0.0);
    for (const auto& rec : res.trajectory.records) {
        CHECK(rec.state.dist(InfectionState::S, 0) == 1.0);
        // no infection risk: welfare is the benefit stream o[a] - c[a] of the healthy row
        const auto R = expected_reward(rec.state.policy, build_rewards(cfg));
        CHECK(rec.welfare == R[0]);
    }
}

TEST_CASE("runs are bit-identical")
{
    const auto a = simulate(preset("fig4_migration"));
    const auto b = simulate(preset("fig4_migration"));
    REQUIRE(a.trajectory.records.size() == b.trajectory.records.size());
    for (std::size_t k = 0; k < a.trajectory.records.size(); ++k) {
        CHECK(a.trajectory.records[k].state == b.trajectory.records[k].state);
        CHECK(a.trajectory.records[k].welfare == b.trajectory.records[k].welfare);
    }
}

TEST_CASE("horizon must be positive")
{
    auto cfg = preset("fig2a");
    cfg.stopping.horizon = 0;
    CHECK_THROWS_AS(simulate(cfg), ValidationError);
}

TEST_CASE("second wave detection")
{
    std::vector<double> rise_fall;
    for (int t = 0; t < 100; ++t) {
        rise_fall.push_back(std::exp(-0.005 * (t - 40) * (t - 40)) * 0.2);
    }
    CHECK_FALSE(detect_second_wave(rise_fall).second_wave);

    auto twin = [](double trough_depth) {
        // peaks of 0.05 at t=20 and t=60 joined by a plateau `trough_depth` below them
        std::vector<double> x;
        for (int t = 0; t <= 80; ++t) {
            const double a = 0.05 * std::exp(-0.01 * (t - 20) * (t - 20));
            const double b = 0.05 * std::exp(-0.01 * (t - 60) * (t - 60));
            double v = std::max(a, b);
            if (t > 20 && t < 60) {
                v = std::max(v, 0.05 - trough_depth);
            }
            x.push_back(v);
        }
        return x;
    };
    CHECK_FALSE(detect_second_wave(twin(0.005)).second_wave);
    const auto deep = detect_second_wave(twin(0.03));
    CHECK(deep.second_wave);
    REQUIRE(deep.peak_days.size() == 2);
    CHECK(deep.peak_days[0] == 20);
    CHECK(deep.peak_days[1] == 60);

    // ripples on the way up do not count as waves
    std::vector<double> noisy;
    for (int t = 0; t < 60; ++t) {
        noisy.push_back(0.001 * t + (t % 2 ? 0.0005 : 0.0));
    }
    CHECK_FALSE(detect_second_wave(noisy).second_wave);
}
