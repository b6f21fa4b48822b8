#include "seer/synth.hpp"

#include <cstdio>
#include <random>

#include "seer/error.hpp"
#include "seer/rng.hpp"

namespace seer {

namespace {

using C = ContextSymbol;

constexpr TemplateSlot g(int k) { return {std::nullopt, k}; }
constexpr TemplateSlot kDelta{SpecialRole::abstract_superclass, 0};
constexpr TemplateSlot kPsi{SpecialRole::interface, 0};
constexpr TemplateSlot kPi{SpecialRole::main_orchestrator, 0};
constexpr TemplateSlot kTheta{SpecialRole::static_utility, 0};

constexpr double lo(int c) { return 0.6 + 0.09 * c; }
constexpr double hi(int c) { return 1.8 + 0.09 * c; }

// Motifs follow the usual participants of each pattern loosely; what matters
// here is that every class has a distinct ordered triad signature.
const std::array<PatternTemplate, kGofCount> kTemplates = {{
    {"Abstract Factory", {{{g(0), C::inheritance, kDelta}, {kDelta, C::constructor, g(1)}, {g(0), C::implementation, g(1)}}}, lo(0), hi(0)},
    {"Adapter", {{{g(0), C::implementation, g(1)}, {g(1), C::general_processing, g(2)}, {g(1), C::getter_setter, g(2)}}}, lo(1), hi(1)},
    {"Bridge", {{{g(0), C::inheritance, kPsi}, {kPsi, C::implementation, g(1)}, {g(1), C::general_processing, g(1)}}}, lo(2), hi(2)},
    {"Builder", {{{g(0), C::constructor, g(1)}, {g(0), C::getter_setter, g(1)}, {g(1), C::constructor, g(2)}}}, lo(3), hi(3)},
    {"Chain of Responsibility", {{{g(0), C::inheritance, g(1)}, {g(1), C::inheritance, g(2)}, {g(2), C::implementation, g(3)}}}, lo(4), hi(4)},
    {"Command", {{{g(0), C::constructor, g(1)}, {kPi, C::implementation, g(1)}, {g(1), C::general_processing, g(2)}}}, lo(5), hi(5)},
    {"Composite", {{{g(0), C::inheritance, kDelta}, {g(0), C::general_processing, g(1)}, {g(1), C::inheritance, kDelta}}}, lo(6), hi(6)},
    {"Decorator", {{{g(0), C::inheritance, kPsi}, {g(0), C::implementation, g(1)}, {g(1), C::inheritance, kPsi}}}, lo(7), hi(7)},
    {"Facade", {{{kPi, C::implementation, g(0)}, {g(0), C::static_method, kTheta}, {g(0), C::implementation, g(1)}}}, lo(8), hi(8)},
    {"Factory", {{{g(0), C::static_method, kTheta}, {kTheta, C::constructor, g(1)}, {g(0), C::implementation, g(1)}}}, lo(9), hi(9)},
    {"Flyweight", {{{g(0), C::static_method, kTheta}, {kTheta, C::getter_setter, g(1)}, {kTheta, C::constructor, g(1)}}}, lo(10), hi(10)},
    {"Interpreter", {{{g(0), C::general_processing, kDelta}, {kDelta, C::general_processing, g(1)}, {g(1), C::inheritance, g(2)}}}, lo(11), hi(11)},
    {"Iterator", {{{g(0), C::constructor, g(1)}, {g(1), C::getter_setter, g(2)}, {g(0), C::getter_setter, g(1)}}}, lo(12), hi(12)},
    {"Mediator", {{{g(0), C::implementation, kPi}, {kPi, C::implementation, g(1)}, {kPi, C::general_processing, g(2)}}}, lo(13), hi(13)},
    {"Memento", {{{g(0), C::cloning, g(1)}, {g(0), C::getter_setter, g(1)}, {g(2), C::implementation, g(0)}}}, lo(14), hi(14)},
    {"Observer", {{{g(0), C::implementation, g(1)}, {g(0), C::implementation, g(2)}, {g(0), C::implementation, g(3)}}}, lo(15), hi(15)},
    {"Prototype", {{{g(0), C::cloning, g(1)}, {g(1), C::cloning, g(2)}, {g(2), C::getter_setter, g(2)}}}, lo(16), hi(16)},
    {"Proxy", {{{g(0), C::inheritance, kPsi}, {g(1), C::getter_setter, g(2)}, {g(1), C::implementation, g(2)}}}, lo(17), hi(17)},
    {"Singleton", {{{g(0), C::static_method, g(1)}, {g(1), C::constructor, g(1)}, {g(2), C::static_method, g(1)}}}, lo(18), hi(18)},
    {"State", {{{g(0), C::inheritance, kDelta}, {g(0), C::getter_setter, g(1)}, {g(1), C::constructor, g(2)}}}, lo(19), hi(19)},
    {"Strategy", {{{g(0), C::inheritance, kPsi}, {g(0), C::general_processing, g(1)}, {g(1), C::static_method, g(2)}}}, lo(20), hi(20)},
    {"Template Method", {{{kDelta, C::general_processing, g(0)}, {kDelta, C::inheritance, g(0)}, {g(0), C::static_method, g(1)}}}, lo(21), hi(21)},
    {"Visitor", {{{g(0), C::implementation, g(1)}, {g(1), C::inheritance, g(0)}, {g(0), C::general_processing, g(1)}}}, lo(22), hi(22)},
}};

}  // namespace

const PatternTemplate& pattern_template(std::size_t class_index) {
  if (class_index >= kTemplates.size()) {
    throw Error(ErrorCode::out_of_range, std::to_string(class_index), "pattern class index");
  }
  return kTemplates[class_index];
}

std::vector<BssSequence> synth_corpus(const SynthSpec& spec) {
  if (spec.n_classes < 1 || spec.n_classes > static_cast<int>(kGofCount)) {
    throw Error(ErrorCode::invalid_parameter, "n_classes", "must be in [1, 23]");
  }
  if (spec.per_class < 1 || spec.per_source < 1 || (spec.total && *spec.total < 1)) {
    throw Error(ErrorCode::invalid_parameter, "per_class/per_source/total", "must be positive");
  }
  if (spec.bounds.min_len < 1 || spec.bounds.min_len > spec.bounds.max_len) {
    throw Error(ErrorCode::invalid_parameter, "bounds");
  }
  if (!(spec.motif_prob >= 0.0 && spec.motif_prob <= 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "motif_prob");
  }
  validate_table(spec.timing);
  const AnchorTable anchors = anchor_table(spec.micrographs);
  const int total = spec.total.value_or(spec.n_classes * spec.per_class);

  std::vector<BssSequence> corpus;
  corpus.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const auto cls = static_cast<std::size_t>(i % spec.n_classes);
    const PatternTemplate& tpl = kTemplates[cls];
    std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<std::size_t> len_dist(spec.bounds.min_len, spec.bounds.max_len);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> noise_slot(0, kNoiseGenericSlots - 1);
    std::uniform_int_distribution<std::size_t> noise_ctx(0, kContextCount - 1);

    const std::size_t length = len_dist(rng);
    std::array<double, kNoiseGenericSlots> slot_entropy{};
    for (double& h : slot_entropy) h = tpl.h_lo + (tpl.h_hi - tpl.h_lo) * unit(rng);

    // Generic slots become letters by first appearance.
    std::array<int, kNoiseGenericSlots> letter_of;
    letter_of.fill(-1);
    int next_letter = 0;
    auto resolve = [&](const TemplateSlot& s) -> std::pair<RoleSymbol, double> {
      if (s.special) {
        auto r = RoleSymbol::special(*s.special);
        return {r, anchors.value(anchor_role(*s.special))};
      }
      auto k = static_cast<std::size_t>(s.generic);
      if (letter_of[k] < 0) letter_of[k] = next_letter++;
      return {RoleSymbol::generic_index(letter_of[k]), slot_entropy[k]};
    };

    BssSequence seq;
    seq.label = std::string(tpl.name);
    char source[64];
    std::snprintf(source, sizeof source, "synth-s%llu-p%03d",
                  static_cast<unsigned long long>(spec.seed), i / spec.per_source);
    seq.source = source;
    std::size_t cursor = 0;
    for (std::size_t e = 0; e < length; ++e) {
      TemplateTriad triad;
      if (unit(rng) < spec.motif_prob) {
        triad = tpl.motif[cursor++ % tpl.motif.size()];
      } else {
        triad.caller = g(noise_slot(rng));
        triad.context = kAllContexts[noise_ctx(rng)];
        triad.callee = g(noise_slot(rng));
      }
      auto [caller, h1] = resolve(triad.caller);
      auto [callee, h2] = resolve(triad.callee);
      seq.events.push_back({caller, triad.context, callee, h1, h2, duration(triad.context, spec.timing)});
    }
    validate_sequence(seq, spec.bounds);
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

}  // namespace seer
