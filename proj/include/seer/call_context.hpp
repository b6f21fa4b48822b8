#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include <json.hpp>

namespace seer {

// Method-type / structural-operator categories of a call.
enum class ContextSymbol {
  constructor,         // SIGMA
  getter_setter,       // PHI
  implementation,      // LAMBDA
  inheritance,         // OMEGA
  general_processing,  // GAMMA
  static_method,       // T
  cloning,             // XI
};

inline constexpr std::size_t kContextCount = 7;
inline constexpr std::array<ContextSymbol, kContextCount> kAllContexts = {
    ContextSymbol::constructor,    ContextSymbol::getter_setter,
    ContextSymbol::implementation, ContextSymbol::inheritance,
    ContextSymbol::general_processing, ContextSymbol::static_method,
    ContextSymbol::cloning};

std::string_view ascii_alias(ContextSymbol s);  // "SIGMA", "PHI", ...
std::string_view glyph(ContextSymbol s);        // "Σ", "φ", ...
// Accepts the ASCII alias or the glyph. Throws unknown_context.
ContextSymbol parse_context(std::string_view text);

struct TimingTable {
  double tau = 1.0;
  // Indexed by ContextSymbol.
  std::array<double, kContextCount> multipliers = {2.50, 0.25, 1.00, 1.20, 1.50, 0.50, 4.00};

  double multiplier(ContextSymbol s) const { return multipliers[static_cast<std::size_t>(s)]; }
  double& multiplier(ContextSymbol s) { return multipliers[static_cast<std::size_t>(s)]; }
};

// Cheapest to most expensive; every valid table is strictly increasing along it.
inline constexpr std::array<ContextSymbol, kContextCount> kDurationOrder = {
    ContextSymbol::getter_setter,  ContextSymbol::static_method,
    ContextSymbol::implementation, ContextSymbol::inheritance,
    ContextSymbol::general_processing, ContextSymbol::constructor,
    ContextSymbol::cloning};

// multiplier(sym) * tau
double duration(ContextSymbol sym, const TimingTable& table = {});

// Throws nonpositive_value or ordering_violation("<higher>,<lower>").
void validate_table(const TimingTable& table);

// {"tau": 1.0, "multipliers": {"SIGMA": 2.5, ...}}; missing keys keep defaults.
TimingTable timing_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TimingTable& table);

}  // namespace seer
