#include "seer/call_context.hpp"

#include "seer/error.hpp"

namespace seer {

namespace {

struct ContextName {
  ContextSymbol symbol;
  std::string_view ascii;
  std::string_view glyph;
};

constexpr std::array<ContextName, kContextCount> kNames = {{
    {ContextSymbol::constructor, "SIGMA", "Σ"},
    {ContextSymbol::getter_setter, "PHI", "φ"},
    {ContextSymbol::implementation, "LAMBDA", "Λ"},
    {ContextSymbol::inheritance, "OMEGA", "Ω"},
    {ContextSymbol::general_processing, "GAMMA", "Γ"},
    {ContextSymbol::static_method, "T", "T"},
    {ContextSymbol::cloning, "XI", "Ξ"},
}};

}  // namespace

std::string_view ascii_alias(ContextSymbol s) { return kNames[static_cast<std::size_t>(s)].ascii; }

std::string_view glyph(ContextSymbol s) { return kNames[static_cast<std::size_t>(s)].glyph; }

ContextSymbol parse_context(std::string_view text) {
  for (const auto& n : kNames) {
    if (text == n.ascii || text == n.glyph) return n.symbol;
  }
  // The Greek phi also appears as the variant form.
  if (text == "ϕ" || text == "Φ") return ContextSymbol::getter_setter;
  throw Error(ErrorCode::unknown_context, std::string(text));
}

double duration(ContextSymbol sym, const TimingTable& table) {
  return table.multiplier(sym) * table.tau;
}

void validate_table(const TimingTable& table) {
  if (!(table.tau > 0.0)) throw Error(ErrorCode::nonpositive_value, "tau");
  for (auto s : kAllContexts) {
    if (!(table.multiplier(s) > 0.0)) {
      throw Error(ErrorCode::nonpositive_value, std::string(ascii_alias(s)));
    }
  }
  for (std::size_t i = 0; i + 1 < kDurationOrder.size(); ++i) {
    const auto lower = kDurationOrder[i];
    const auto higher = kDurationOrder[i + 1];
    if (!(table.multiplier(lower) < table.multiplier(higher))) {
      throw Error(ErrorCode::ordering_violation,
                  std::string(ascii_alias(higher)) + "," + std::string(ascii_alias(lower)),
                  "expected " + std::string(ascii_alias(lower)) + " < " +
                      std::string(ascii_alias(higher)));
    }
  }
}

TimingTable timing_from_json(const nlohmann::json& j) {
  TimingTable t;
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "timing", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "tau") {
      if (!value.is_number()) throw Error(ErrorCode::schema_violation, "tau");
      t.tau = value.get<double>();
    } else if (key == "multipliers") {
      if (!value.is_object()) throw Error(ErrorCode::schema_violation, "multipliers");
      for (const auto& [sym, m] : value.items()) {
        if (!m.is_number()) throw Error(ErrorCode::schema_violation, "multipliers." + sym);
        t.multiplier(parse_context(sym)) = m.get<double>();
      }
    } else {
      throw Error(ErrorCode::schema_violation, key, "unknown timing field");
    }
  }
  validate_table(t);
  return t;
}

nlohmann::json to_json(const TimingTable& table) {
  nlohmann::json m = nlohmann::json::object();
  for (auto s : kAllContexts) m[std::string(ascii_alias(s))] = table.multiplier(s);
  return {{"tau", table.tau}, {"multipliers", m}};
}

}  // namespace seer
