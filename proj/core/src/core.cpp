#include "dpg/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace dpg {

namespace {

void require(bool ok, std::string_view field, std::string_view bound, double value)
{
    if (!ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "invalid parameter " << field << " = " << value << ": must satisfy " << bound;
        throw ValidationError(msg.str());
    }
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Renormalizes `values` in place if its sum is within tolerance of one.
void normalize_probabilities(std::span<double> values, std::string_view what)
{
    double sum = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string(what) + " has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " sums to " << sum << ", expected 1";
        throw ValidationError(msg.str());
    }
    // repeat until the computed sum is exactly 1, so a second pass is a no-op
    for (int pass = 0; pass < 4 && sum != 1.0; ++pass) {
        for (double& v : values) {
            v /= sum;
        }
        sum = std::accumulate(values.begin(), values.end(), 0.0);
    }
}

} // namespace

std::string_view to_string(InfectionState s)
{
    static constexpr std::array<std::string_view, kNumInfectionStates> names = {"S", "A", "I", "R", "U"};
    return names[rank(s)];
}

InfectionState parse_infection_state(std::string_view name)
{
    for (auto s : kAllInfectionStates) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ValidationError("unknown infection state '" + std::string(name) + "'");
}

std::string_view to_string(BehaviorClass c)
{
    static constexpr std::array<std::string_view, kNumBehaviorClasses> names = {"healthy", "infected",
                                                                                 "recovered"};
    return names[rank(c)];
}

BehaviorClass parse_behavior_class(std::string_view name)
{
    for (auto c : kAllBehaviorClasses) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ValidationError("unknown behavior class '" + std::string(name) + "'");
}

ModelParams validate_params(const ModelParams& p)
{
    require(in_unit(p.beta_A), "beta_A", "0 <= beta_A <= 1", p.beta_A);
    require(in_unit(p.beta_I), "beta_I", "0 <= beta_I <= 1", p.beta_I);
    require(p.delta_A_I > 0.0 && p.delta_A_I <= 1.0, "delta_A_I", "0 < delta_A_I <= 1", p.delta_A_I);
    require(in_unit(p.delta_A_U), "delta_A_U", "0 <= delta_A_U <= 1", p.delta_A_U);
    require(p.delta_A_I + p.delta_A_U <= 1.0, "delta_A_I + delta_A_U", "delta_A_I + delta_A_U <= 1",
            p.delta_A_I + p.delta_A_U);
    require(p.delta_I_R > 0.0 && p.delta_I_R <= 1.0, "delta_I_R", "0 < delta_I_R <= 1", p.delta_I_R);
    require(in_unit(p.delta_U_R), "delta_U_R", "0 <= delta_U_R <= 1", p.delta_U_R);
    require(p.epsilon > 0.0 && std::isfinite(p.epsilon), "epsilon", "epsilon > 0", p.epsilon);
    require(p.num_zones >= 1, "num_zones", "num_zones >= 1", p.num_zones);
    require(p.a_max >= 0, "a_max", "a_max >= 0", p.a_max);
    require(p.alpha >= 0.0 && p.alpha < 1.0, "alpha", "0 <= alpha < 1", p.alpha);
    require(p.lambda >= 0.0 && std::isfinite(p.lambda), "lambda", "lambda >= 0", p.lambda);
    require(p.eta > 0.0 && p.eta <= 1.0, "eta", "0 < eta <= 1", p.eta);
    require(p.c_mig >= 0.0 && std::isfinite(p.c_mig), "c_mig", "c_mig >= 0", p.c_mig);
    require(p.c_dis >= 0.0 && std::isfinite(p.c_dis), "c_dis", "c_dis >= 0", p.c_dis);
    return p;
}

Dimensions::Dimensions(int num_zones, int a_max) : num_zones_(num_zones), a_max_(a_max)
{
    if (num_zones < 1) {
        throw ValidationError("num_zones must be >= 1");
    }
    if (a_max < 0) {
        throw ValidationError("a_max must be >= 0");
    }
}

StateIndex Dimensions::state_at(std::size_t flat) const
{
    if (flat >= num_states()) {
        throw std::out_of_range("state index out of range");
    }
    return {kAllInfectionStates[flat % kNumInfectionStates], static_cast<int>(flat / kNumInfectionStates)};
}

ActionIndex Dimensions::action_at(std::size_t flat) const
{
    if (flat >= num_actions()) {
        throw std::out_of_range("action index out of range");
    }
    const auto n = static_cast<std::size_t>(num_degrees());
    return {static_cast<int>(flat % n), static_cast<int>(flat / n)};
}

StateDistribution::StateDistribution(Dimensions dims, std::vector<double> mass)
    : dims_(dims), mass_(std::move(mass))
{
    if (mass_.size() != dims_.num_states()) {
        throw ValidationError("state distribution has " + std::to_string(mass_.size()) + " entries, expected " +
                              std::to_string(dims_.num_states()));
    }
    normalize_probabilities(mass_, "state distribution");
}

double StateDistribution::zone_mass(int zone) const
{
    double sum = 0.0;
    for (auto s : kAllInfectionStates) {
        sum += (*this)(s, zone);
    }
    return sum;
}

double StateDistribution::state_mass(InfectionState s) const
{
    double sum = 0.0;
    for (int z = 0; z < dims_.num_zones(); ++z) {
        sum += (*this)(s, z);
    }
    return sum;
}

Policy::Policy(Dimensions dims, std::vector<double> rows) : dims_(dims), rows_(std::move(rows))
{
    const std::size_t n = dims_.num_actions();
    if (rows_.size() != kNumBehaviorClasses * static_cast<std::size_t>(dims_.num_zones()) * n) {
        throw ValidationError("policy has " + std::to_string(rows_.size()) + " entries, expected " +
                              std::to_string(kNumBehaviorClasses * dims_.num_zones() * n));
    }
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims_.num_zones(); ++z) {
            std::span<double> row(rows_.data() + row_offset(dims_, c, z), n);
            normalize_probabilities(row, "policy row (" + std::string(to_string(c)) + ", zone " +
                                             std::to_string(z) + ")");
        }
    }
}

std::span<const double> Policy::class_row(BehaviorClass c, int zone) const
{
    return {rows_.data() + row_offset(dims_, c, zone), dims_.num_actions()};
}

double Policy::mean_degree(BehaviorClass c, int zone) const
{
    const auto row = class_row(c, zone);
    double mean = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        mean += dims_.action_at(j).degree * row[j];
    }
    return mean;
}

double Policy::move_probability(BehaviorClass c, int zone, int target) const
{
    const auto row = class_row(c, zone);
    double sum = 0.0;
    for (int a = 0; a <= dims_.a_max(); ++a) {
        sum += row[dims_.action_index(a, target)];
    }
    return sum;
}

SocialState::SocialState(Policy policy_, StateDistribution dist_) : policy(std::move(policy_)), dist(std::move(dist_))
{
    if (!(policy.dims() == dist.dims())) {
        throw ValidationError("policy and state distribution have different dimensions");
    }
}

Policy uniform_no_move_policy(const ModelParams& p)
{
    const Dimensions dims(p);
    const double share = 1.0 / dims.num_degrees();
    std::vector<double> rows(kNumBehaviorClasses * dims.num_zones() * dims.num_actions(), 0.0);
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            const std::size_t offset = Policy::row_offset(dims, c, z);
            for (int a = 0; a <= dims.a_max(); ++a) {
                rows[offset + dims.action_index(a, z)] = share;
            }
        }
    }
    return Policy(dims, std::move(rows));
}

} // namespace dpg
