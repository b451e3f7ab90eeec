#pragma once

// Domain types shared by every module: infection states, model parameters,
// state/action indexing, state distributions, policies and social states.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dpg {

/// Raised when an input violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails in a way that should be impossible
/// for valid inputs.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityTolerance = 1e-12;

enum class InfectionState : std::uint8_t { S = 0, A = 1, I = 2, R = 3, U = 4 };

inline constexpr std::size_t kNumInfectionStates = 5;
inline constexpr std::array<InfectionState, kNumInfectionStates> kAllInfectionStates = {
    InfectionState::S, InfectionState::A, InfectionState::I, InfectionState::R, InfectionState::U};

constexpr std::size_t rank(InfectionState s) { return static_cast<std::size_t>(s); }
std::string_view to_string(InfectionState s);
InfectionState parse_infection_state(std::string_view name);

/// Agents that never showed symptoms (S, A, U) cannot tell their states
/// apart and share one policy row per zone.
enum class BehaviorClass : std::uint8_t { Healthy = 0, Infected = 1, Recovered = 2 };

inline constexpr std::size_t kNumBehaviorClasses = 3;
inline constexpr std::array<BehaviorClass, kNumBehaviorClasses> kAllBehaviorClasses = {
    BehaviorClass::Healthy, BehaviorClass::Infected, BehaviorClass::Recovered};

constexpr BehaviorClass behavior_class(InfectionState s)
{
    switch (s) {
    case InfectionState::I:
        return BehaviorClass::Infected;
    case InfectionState::R:
        return BehaviorClass::Recovered;
    default:
        return BehaviorClass::Healthy;
    }
}
constexpr std::size_t rank(BehaviorClass c) { return static_cast<std::size_t>(c); }
std::string_view to_string(BehaviorClass c);
BehaviorClass parse_behavior_class(std::string_view name);

struct ModelParams {
    double beta_A = 0.2;
    double beta_I = 0.2;
    double delta_A_I = 0.08;
    double delta_A_U = 0.08;
    double delta_I_R = 0.04;
    double delta_U_R = 0.0;
    double epsilon = 0.01; ///< fictitious activation mass
    int num_zones = 1;
    int a_max = 6;
    double alpha = 0.0;  ///< discount factor, [0, 1)
    double lambda = 10.0; ///< bounded rationality factor
    double eta = 0.2;    ///< policy update inertia rate, (0, 1]
    double c_mig = 0.0;
    double c_dis = 10.0;

    bool operator==(const ModelParams&) const = default;
};

/// Returns `p` unchanged if every parameter bound holds, otherwise throws
/// ValidationError naming the offending field.
ModelParams validate_params(const ModelParams& p);

struct StateIndex {
    InfectionState state;
    int zone;
    bool operator==(const StateIndex&) const = default;
};

struct ActionIndex {
    int degree;
    int target;
    bool operator==(const ActionIndex&) const = default;
};

/// Owns the flattening conventions. States are zone-major
/// (5 * zone + rank(state)); actions are target-major
/// ((a_max + 1) * target + degree).
class Dimensions {
public:
    Dimensions(int num_zones, int a_max);
    explicit Dimensions(const ModelParams& p) : Dimensions(p.num_zones, p.a_max) {}

    int num_zones() const { return num_zones_; }
    int a_max() const { return a_max_; }
    int num_degrees() const { return a_max_ + 1; }
    std::size_t num_states() const { return kNumInfectionStates * static_cast<std::size_t>(num_zones_); }
    std::size_t num_actions() const
    {
        return static_cast<std::size_t>(num_degrees()) * static_cast<std::size_t>(num_zones_);
    }

    std::size_t state_index(InfectionState s, int zone) const
    {
        return kNumInfectionStates * static_cast<std::size_t>(zone) + rank(s);
    }
    std::size_t state_index(StateIndex i) const { return state_index(i.state, i.zone); }
    std::size_t action_index(int degree, int target) const
    {
        return static_cast<std::size_t>(num_degrees()) * static_cast<std::size_t>(target) +
               static_cast<std::size_t>(degree);
    }
    std::size_t action_index(ActionIndex i) const { return action_index(i.degree, i.target); }

    StateIndex state_at(std::size_t flat) const;
    ActionIndex action_at(std::size_t flat) const;

    bool operator==(const Dimensions&) const = default;

private:
    int num_zones_;
    int a_max_;
};

/// Mass d[s,z] over infection state x zone; a point on the simplex.
class StateDistribution {
public:
    /// Validates nonnegativity and unit mass. Sums within kProbabilityTolerance
    /// of one are renormalized, larger deviations are rejected.
    StateDistribution(Dimensions dims, std::vector<double> mass);

    const Dimensions& dims() const { return dims_; }
    double operator()(InfectionState s, int zone) const { return mass_[dims_.state_index(s, zone)]; }
    std::span<const double> values() const { return mass_; }

    double zone_mass(int zone) const;
    double state_mass(InfectionState s) const;

    bool operator==(const StateDistribution&) const = default;

private:
    Dimensions dims_;
    std::vector<double> mass_;
};

/// Shared policy pi[a, z~ | s, z]. One row is stored per (behavior class, zone),
/// so the rows of S, A and U in a zone are the same memory.
class Policy {
public:
    /// `rows` holds 3 * Z rows of num_actions() entries, ordered
    /// (class-major, then zone). Rows are validated like StateDistribution.
    Policy(Dimensions dims, std::vector<double> rows);

    const Dimensions& dims() const { return dims_; }

    std::span<const double> row(InfectionState s, int zone) const { return class_row(behavior_class(s), zone); }
    std::span<const double> class_row(BehaviorClass c, int zone) const;
    double operator()(InfectionState s, int zone, std::size_t action) const { return row(s, zone)[action]; }

    std::span<const double> values() const { return rows_; }

    /// Expected activation degree of the row.
    double mean_degree(BehaviorClass c, int zone) const;
    /// Probability of choosing target zone `target` from the row.
    double move_probability(BehaviorClass c, int zone, int target) const;

    static std::size_t row_offset(const Dimensions& dims, BehaviorClass c, int zone)
    {
        return (rank(c) * static_cast<std::size_t>(dims.num_zones()) + static_cast<std::size_t>(zone)) *
               dims.num_actions();
    }

    bool operator==(const Policy&) const = default;

private:
    Dimensions dims_;
    std::vector<double> rows_;
};

struct SocialState {
    SocialState(Policy policy, StateDistribution dist);

    Policy policy;
    StateDistribution dist;

    const Dimensions& dims() const { return dist.dims(); }
    bool operator==(const SocialState&) const = default;
};

/// Every agent picks a degree uniformly at random and stays in its zone.
Policy uniform_no_move_policy(const ModelParams& p);

} // namespace dpg
