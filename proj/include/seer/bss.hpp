#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "seer/call_context.hpp"
#include "seer/spectral.hpp"

namespace seer {

enum class SpecialRole {
  abstract_superclass,  // Δ DELTA
  interface,            // Ψ PSI
  main_orchestrator,    // Π PI
  static_utility,       // Θ THETA
};

AnchorRole anchor_role(SpecialRole r);

// Either one of the four special symbols or a generic letter A..Z.
class RoleSymbol {
 public:
  static RoleSymbol special(SpecialRole r);
  static RoleSymbol generic(char letter);
  static RoleSymbol generic_index(int index);  // 0 -> A

  bool is_special() const noexcept { return special_.has_value(); }
  SpecialRole special_role() const { return *special_; }
  char letter() const noexcept { return letter_; }
  int generic_index() const noexcept { return letter_ - 'A'; }

  std::string ascii() const;  // "DELTA" or "A"
  std::string glyph() const;  // "Δ" or "A"

  friend auto operator<=>(const RoleSymbol&, const RoleSymbol&) = default;

 private:
  RoleSymbol() = default;
  std::optional<SpecialRole> special_;
  char letter_ = 0;
};

// Accepts ASCII aliases, glyphs and single uppercase letters. Throws unknown_symbol.
RoleSymbol parse_role(std::string_view text);

inline constexpr std::size_t kGofCount = 23;
extern const std::array<std::string_view, kGofCount> kGofPatterns;
bool is_gof_label(std::string_view label);

struct RawEvent {
  RoleSymbol caller;
  ContextSymbol context;
  RoleSymbol callee;
};

struct CallEvent {
  RoleSymbol caller;
  ContextSymbol context;
  RoleSymbol callee;
  double h_caller = 0.0;
  double h_callee = 0.0;
  double t = 0.0;

  friend bool operator==(const CallEvent&, const CallEvent&) = default;
};

struct LengthBounds {
  std::size_t min_len = 8;
  std::size_t max_len = 50;
};

struct BssSequence {
  std::vector<CallEvent> events;
  std::optional<std::string> label;
  std::string source;

  friend bool operator==(const BssSequence&, const BssSequence&) = default;
};

// Throws length_out_of_bounds / schema_violation for an unknown label.
void validate_sequence(const BssSequence& seq, const LengthBounds& bounds = {});

using EntropyMap = std::map<RoleSymbol, double>;

struct EnrichOptions {
  AnchorTable anchors = anchor_table();
  TimingTable timing = {};
  LengthBounds bounds = {};
  std::optional<std::string> label;
  std::string source;
};

// Attaches (h_caller, h_callee, t) to each triad. Special symbols take their
// anchor value; generic symbols must be present in `entropy_of`.
BssSequence enrich(const std::vector<RawEvent>& events, const EntropyMap& entropy_of,
                   const EnrichOptions& options = {});

/// Token vocabulary with reserved ids PAD=0, UNK=1, CLS=2.
///
/// Role tokens are spelled "role:<ascii>" and context tokens "ctx:<ascii>" so
/// the static-method context T never collides with the generic letter T.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;

  Vocabulary();
  // Reserved tokens followed by the given tokens in sorted order.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  int id_of(const std::string& token) const;  // kUnk when absent
  const std::string& token(int id) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

std::string role_token(const RoleSymbol& r);
std::string context_token(ContextSymbol c);

// Throws empty_input on an empty corpus.
Vocabulary build_vocab(const std::vector<BssSequence>& corpus);
// Every role and context symbol: 3 reserved + 7 contexts + 4 specials + 26 letters.
Vocabulary full_vocabulary();

inline constexpr std::size_t kTokensPerEvent = 3;

struct TokenizedSequence {
  std::vector<int> ids;
  std::vector<std::uint8_t> attention_mask;
  std::vector<std::array<double, 3>> side_channel;  // (h1, h2, t) per token
  std::size_t real_length() const;
};

// CLS, then caller/context/callee per event, PAD up to max_len.
// Throws overflow when 1 + 3 * |events| > max_len.
TokenizedSequence tokenize(const BssSequence& seq, const Vocabulary& vocab, std::size_t max_len);

// Bijection over A..Z applied to generic symbols; specials are fixed points.
class RolePermutation {
 public:
  static RolePermutation identity();
  static RolePermutation random(std::uint64_t seed);
  static RolePermutation from_mapping(const std::array<char, 26>& mapping);

  RoleSymbol apply(const RoleSymbol& r) const;
  char map(char letter) const { return mapping_[static_cast<std::size_t>(letter - 'A')]; }

 private:
  std::array<char, 26> mapping_{};
};

BssSequence augment(const BssSequence& seq, std::uint64_t seed);
BssSequence augment_with(const BssSequence& seq, const RolePermutation& perm);

nlohmann::json to_json(const BssSequence& seq);
BssSequence sequence_from_json(const nlohmann::json& j, const LengthBounds& bounds = {});
std::vector<BssSequence> read_jsonl(std::istream& in, const LengthBounds& bounds = {});
std::vector<BssSequence> read_jsonl_file(const std::string& path, const LengthBounds& bounds = {});
void write_jsonl(std::ostream& out, const std::vector<BssSequence>& corpus);

struct CorpusSplit {
  std::vector<BssSequence> train;
  std::vector<BssSequence> test;
};

// Whole sources go to one side. round(test_fraction * #sources) sources are
// drawn for the test side with a seeded shuffle of the sorted source names.
CorpusSplit split_by_source(const std::vector<BssSequence>& corpus, double test_fraction,
                            std::uint64_t seed);

}  // namespace seer
