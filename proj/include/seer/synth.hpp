#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "seer/bss.hpp"

namespace seer {

// One participant of a template triad: a special role, or generic slot k
// (renamed to a letter by first appearance when a sequence is emitted).
struct TemplateSlot {
  std::optional<SpecialRole> special;
  int generic = 0;
};

struct TemplateTriad {
  TemplateSlot caller;
  ContextSymbol context;
  TemplateSlot callee;
};

// Stochastic template of one synthetic pattern class. A sequence cycles through
// `motif` and interleaves uniformly random generic noise triads; generic objects
// draw their entropy uniformly from [h_lo, h_hi].
struct PatternTemplate {
  std::string_view name;
  std::array<TemplateTriad, 3> motif;
  double h_lo = 0.0;
  double h_hi = 0.0;
};

const PatternTemplate& pattern_template(std::size_t class_index);

inline constexpr int kNoiseGenericSlots = 5;

struct SynthSpec {
  int n_classes = 4;
  int per_class = 50;
  // When set, overrides n_classes * per_class; labels are still assigned
  // round-robin so class sizes differ by at most one.
  std::optional<int> total;
  std::uint64_t seed = 7;
  int per_source = 10;  // consecutive sequences sharing one source project
  LengthBounds bounds = {};
  double motif_prob = 0.75;
  TimingTable timing = {};
  MicrographParams micrographs = {};
};

// Deterministic under `seed`; throws invalid_parameter for n_classes outside [1, 23].
std::vector<BssSequence> synth_corpus(const SynthSpec& spec);

}  // namespace seer
