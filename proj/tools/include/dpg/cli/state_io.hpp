#pragma once

// Social-state files and mass-split specs for the equilibrium commands.

#include "dpg/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dpg::cli {

/// {"num_zones", "a_max", "distribution": {"S": [per zone], ...},
///  "policy": {"healthy": [[row per zone]], "infected": ..., "recovered": ...}}
std::string social_state_to_json(const SocialState& social);
/// Throws ValidationError if the file does not match `dims`.
SocialState social_state_from_json(std::string_view text, const Dimensions& dims);

/// Tokens of the form "S:0=0.9" (state, zone index, mass). Unlisted entries are 0.
std::vector<double> parse_mass_tokens(const std::vector<std::string>& tokens, const Dimensions& dims);
/// Same layout as the "distribution" block of a social-state file.
std::vector<double> parse_mass_json(std::string_view text, const Dimensions& dims);

} // namespace dpg::cli
