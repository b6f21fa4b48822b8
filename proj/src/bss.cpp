#include "seer/bss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "seer/error.hpp"

namespace seer {

using nlohmann::json;

namespace {

struct SpecialName {
  SpecialRole role;
  std::string_view ascii;
  std::string_view glyph;
};

constexpr std::array<SpecialName, 4> kSpecialNames = {{
    {SpecialRole::abstract_superclass, "DELTA", "Δ"},
    {SpecialRole::interface, "PSI", "Ψ"},
    {SpecialRole::main_orchestrator, "PI", "Π"},
    {SpecialRole::static_utility, "THETA", "Θ"},
}};

}  // namespace

const std::array<std::string_view, kGofCount> kGofPatterns = {
    "Abstract Factory", "Adapter",  "Bridge",    "Builder",   "Chain of Responsibility",
    "Command",          "Composite", "Decorator", "Facade",    "Factory",
    "Flyweight",        "Interpreter", "Iterator", "Mediator", "Memento",
    "Observer",         "Prototype", "Proxy",     "Singleton", "State",
    "Strategy",         "Template Method", "Visitor"};

bool is_gof_label(std::string_view label) {
  return std::find(kGofPatterns.begin(), kGofPatterns.end(), label) != kGofPatterns.end();
}

AnchorRole anchor_role(SpecialRole r) {
  switch (r) {
    case SpecialRole::abstract_superclass: return AnchorRole::abstract_superclass;
    case SpecialRole::interface: return AnchorRole::interface;
    case SpecialRole::main_orchestrator: return AnchorRole::main_orchestrator;
    case SpecialRole::static_utility: return AnchorRole::static_utility;
  }
  return AnchorRole::interface;
}

RoleSymbol RoleSymbol::special(SpecialRole r) {
  RoleSymbol s;
  s.special_ = r;
  return s;
}

RoleSymbol RoleSymbol::generic(char letter) {
  if (letter < 'A' || letter > 'Z') throw Error(ErrorCode::unknown_symbol, std::string(1, letter));
  RoleSymbol s;
  s.letter_ = letter;
  return s;
}

RoleSymbol RoleSymbol::generic_index(int index) {
  if (index < 0 || index >= 26) {
    throw Error(ErrorCode::unknown_symbol, std::to_string(index), "generic symbols are A..Z");
  }
  return generic(static_cast<char>('A' + index));
}

std::string RoleSymbol::ascii() const {
  if (special_) return std::string(kSpecialNames[static_cast<std::size_t>(*special_)].ascii);
  return std::string(1, letter_);
}

std::string RoleSymbol::glyph() const {
  if (special_) return std::string(kSpecialNames[static_cast<std::size_t>(*special_)].glyph);
  return std::string(1, letter_);
}

RoleSymbol parse_role(std::string_view text) {
  for (const auto& n : kSpecialNames) {
    if (text == n.ascii || text == n.glyph) return RoleSymbol::special(n.role);
  }
  if (text.size() == 1 && text[0] >= 'A' && text[0] <= 'Z') return RoleSymbol::generic(text[0]);
  throw Error(ErrorCode::unknown_symbol, std::string(text));
}

void validate_sequence(const BssSequence& seq, const LengthBounds& bounds) {
  const auto n = seq.events.size();
  if (n < bounds.min_len || n > bounds.max_len) {
    throw Error(ErrorCode::length_out_of_bounds, seq.source,
                std::to_string(n) + " events, allowed [" + std::to_string(bounds.min_len) + ", " +
                    std::to_string(bounds.max_len) + "]");
  }
  if (seq.label && !is_gof_label(*seq.label)) {
    throw Error(ErrorCode::schema_violation, *seq.label, "label is not a GoF pattern name");
  }
}

BssSequence enrich(const std::vector<RawEvent>& events, const EntropyMap& entropy_of,
                   const EnrichOptions& options) {
  auto entropy = [&](const RoleSymbol& r) {
    if (r.is_special()) return options.anchors.value(anchor_role(r.special_role()));
    auto it = entropy_of.find(r);
    if (it == entropy_of.end()) throw Error(ErrorCode::unknown_symbol, r.ascii(), "no entropy");
    if (!std::isfinite(it->second) || it->second < 0.0) {
      throw Error(ErrorCode::invalid_parameter, r.ascii(), "entropy must be finite and >= 0");
    }
    return it->second;
  };
  BssSequence seq;
  seq.label = options.label;
  seq.source = options.source;
  seq.events.reserve(events.size());
  for (const auto& e : events) {
    seq.events.push_back({e.caller, e.context, e.callee, entropy(e.caller), entropy(e.callee),
                          duration(e.context, options.timing)});
  }
  validate_sequence(seq, options.bounds);
  return seq;
}

std::string role_token(const RoleSymbol& r) { return "role:" + r.ascii(); }

std::string context_token(ContextSymbol c) { return "ctx:" + std::string(ascii_alias(c)); }

Vocabulary::Vocabulary() : tokens_{"[PAD]", "[UNK]", "[CLS]"} {
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_[tokens_[i]] = static_cast<int>(i);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  Vocabulary v;
  for (auto& t : tokens) {
    if (v.index_.count(t)) continue;
    v.index_[t] = static_cast<int>(v.tokens_.size());
    v.tokens_.push_back(std::move(t));
  }
  return v;
}

int Vocabulary::id_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error(ErrorCode::out_of_range, std::to_string(id), "token id");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

Vocabulary build_vocab(const std::vector<BssSequence>& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::empty_input, "corpus");
  std::set<std::string> symbols;
  for (const auto& seq : corpus) {
    for (const auto& e : seq.events) {
      symbols.insert(role_token(e.caller));
      symbols.insert(context_token(e.context));
      symbols.insert(role_token(e.callee));
    }
  }
  return Vocabulary::from_tokens({symbols.begin(), symbols.end()});
}

Vocabulary full_vocabulary() {
  std::vector<std::string> tokens;
  for (auto c : kAllContexts) tokens.push_back(context_token(c));
  for (const auto& n : kSpecialNames) tokens.push_back(role_token(RoleSymbol::special(n.role)));
  for (int i = 0; i < 26; ++i) tokens.push_back(role_token(RoleSymbol::generic_index(i)));
  return Vocabulary::from_tokens(std::move(tokens));
}

std::size_t TokenizedSequence::real_length() const {
  return static_cast<std::size_t>(std::count(attention_mask.begin(), attention_mask.end(), 1));
}

TokenizedSequence tokenize(const BssSequence& seq, const Vocabulary& vocab, std::size_t max_len) {
  const std::size_t needed = 1 + kTokensPerEvent * seq.events.size();
  if (needed > max_len) {
    throw Error(ErrorCode::overflow, seq.source,
                std::to_string(needed) + " tokens needed, max_len " + std::to_string(max_len));
  }
  TokenizedSequence out;
  out.ids.assign(max_len, Vocabulary::kPad);
  out.attention_mask.assign(max_len, 0);
  out.side_channel.assign(max_len, {0.0, 0.0, 0.0});
  out.ids[0] = Vocabulary::kCls;
  out.attention_mask[0] = 1;
  std::size_t pos = 1;
  for (const auto& e : seq.events) {
    const std::array<double, 3> side = {e.h_caller, e.h_callee, e.t};
    for (const auto& tok : {role_token(e.caller), context_token(e.context), role_token(e.callee)}) {
      out.ids[pos] = vocab.id_of(tok);
      out.attention_mask[pos] = 1;
      out.side_channel[pos] = side;
      ++pos;
    }
  }
  return out;
}

RolePermutation RolePermutation::identity() {
  RolePermutation p;
  std::iota(p.mapping_.begin(), p.mapping_.end(), 'A');
  return p;
}

RolePermutation RolePermutation::random(std::uint64_t seed) {
  RolePermutation p = identity();
  std::mt19937_64 rng(seed);
  std::shuffle(p.mapping_.begin(), p.mapping_.end(), rng);
  return p;
}

RolePermutation RolePermutation::from_mapping(const std::array<char, 26>& mapping) {
  std::array<bool, 26> hit{};
  for (char c : mapping) {
    if (c < 'A' || c > 'Z' || hit[static_cast<std::size_t>(c - 'A')]) {
      throw Error(ErrorCode::invalid_parameter, "mapping", "not a bijection over A..Z");
    }
    hit[static_cast<std::size_t>(c - 'A')] = true;
  }
  RolePermutation p;
  p.mapping_ = mapping;
  return p;
}

RoleSymbol RolePermutation::apply(const RoleSymbol& r) const {
  return r.is_special() ? r : RoleSymbol::generic(map(r.letter()));
}

BssSequence augment_with(const BssSequence& seq, const RolePermutation& perm) {
  BssSequence out = seq;
  // Entropy is bound to the object, so h values travel with the renamed symbol.
  for (auto& e : out.events) {
    e.caller = perm.apply(e.caller);
    e.callee = perm.apply(e.callee);
  }
  return out;
}

BssSequence augment(const BssSequence& seq, std::uint64_t seed) {
  return augment_with(seq, RolePermutation::random(seed));
}

json to_json(const BssSequence& seq) {
  json events = json::array();
  for (const auto& e : seq.events) {
    events.push_back({{"caller", e.caller.ascii()},
                      {"context", ascii_alias(e.context)},
                      {"callee", e.callee.ascii()},
                      {"h1", e.h_caller},
                      {"h2", e.h_callee},
                      {"t", e.t}});
  }
  return {{"label", seq.label ? json(*seq.label) : json(nullptr)},
          {"source", seq.source},
          {"events", events}};
}

namespace {

double nonnegative_number(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error(ErrorCode::schema_violation, key, "missing or not a number");
  }
  double v = it->get<double>();
  if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::invalid_parameter, key, "must be >= 0");
  return v;
}

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::schema_violation, key, "missing or not a string");
  }
  return it->get<std::string>();
}

}  // namespace

BssSequence sequence_from_json(const json& j, const LengthBounds& bounds) {
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "$", "expected an object");
  BssSequence seq;
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::schema_violation, "label");
    seq.label = it->get<std::string>();
  }
  if (auto it = j.find("source"); it != j.end()) {
    if (!it->is_string()) throw Error(ErrorCode::schema_violation, "source");
    seq.source = it->get<std::string>();
  }
  auto it = j.find("events");
  if (it == j.end() || !it->is_array()) throw Error(ErrorCode::schema_violation, "events");
  for (const auto& je : *it) {
    if (!je.is_object()) throw Error(ErrorCode::schema_violation, "events[]");
    seq.events.push_back({parse_role(string_field(je, "caller")),
                          parse_context(string_field(je, "context")),
                          parse_role(string_field(je, "callee")), nonnegative_number(je, "h1"),
                          nonnegative_number(je, "h2"), nonnegative_number(je, "t")});
  }
  validate_sequence(seq, bounds);
  return seq;
}

std::vector<BssSequence> read_jsonl(std::istream& in, const LengthBounds& bounds) {
  std::vector<BssSequence> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::schema_violation, "line " + std::to_string(lineno), e.what());
    }
    corpus.push_back(sequence_from_json(j, bounds));
  }
  return corpus;
}

std::vector<BssSequence> read_jsonl_file(const std::string& path, const LengthBounds& bounds) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, path, "cannot open");
  return read_jsonl(in, bounds);
}

void write_jsonl(std::ostream& out, const std::vector<BssSequence>& corpus) {
  for (const auto& seq : corpus) out << to_json(seq).dump() << '\n';
}

CorpusSplit split_by_source(const std::vector<BssSequence>& corpus, double test_fraction,
                            std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "test_fraction");
  }
  std::set<std::string> source_set;
  for (const auto& s : corpus) source_set.insert(s.source);
  std::vector<std::string> sources(source_set.begin(), source_set.end());
  std::mt19937_64 rng(seed);
  std::shuffle(sources.begin(), sources.end(), rng);
  const auto n_test =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(sources.size())));
  std::set<std::string> test_sources(sources.begin(),
                                     sources.begin() + static_cast<std::ptrdiff_t>(n_test));
  CorpusSplit split;
  for (const auto& s : corpus) {
    (test_sources.count(s.source) ? split.test : split.train).push_back(s);
  }
  return split;
}

}  // namespace seer
