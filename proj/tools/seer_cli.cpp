// seer: command-line front end for the spectral role encoding and toy classifier.
//
// stdout carries data (JSON, JSONL or CSV); stderr carries diagnostics.
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seer/bss.hpp"
#include "seer/call_context.hpp"
#include "seer/checkpoint.hpp"
#include "seer/error.hpp"
#include "seer/graph.hpp"
#include "seer/rng.hpp"
#include "seer/spectral.hpp"
#include "seer/synth.hpp"
#include "seer/train.hpp"

using nlohmann::json;
using namespace seer;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool csv = false;
  bool strict = false;
  std::string config_path;
};

// Loaded from --config or SEER_CONFIG. Either a bare classifier config, or an
// object with optional "model", "timing" and "micrographs" sections.
struct Settings {
  ClassifierConfig model;
  TimingTable timing;
  MicrographParams micrographs;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, path, "cannot open");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::schema_violation, path, e.what());
  }
}

MicrographParams micrographs_from_json(const json& j, MicrographParams p) {
  for (const auto& [k, v] : j.items()) {
    if (k == "n_static") p.n_static = v.get<int>();
    else if (k == "n_main") p.n_main = v.get<int>();
    else if (k == "k_abs") p.k_abs = v.get<int>();
    else throw Error(ErrorCode::schema_violation, k, "unknown micrograph key");
  }
  return p;
}

Settings load_settings(const Globals& g) {
  Settings s;
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SEER_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw Error(ErrorCode::schema_violation, path, "config must be an object");
    const bool sectioned = j.contains("model") || j.contains("timing") || j.contains("micrographs");
    try {
      if (sectioned) {
        for (const auto& [k, v] : j.items()) {
          if (k == "model") s.model = classifier_config_from_json(v);
          else if (k == "timing") s.timing = timing_from_json(v);
          else if (k == "micrographs") s.micrographs = micrographs_from_json(v, s.micrographs);
          else throw Error(ErrorCode::schema_violation, k, "unknown config section");
        }
      } else {
        s.model = classifier_config_from_json(j);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema_violation, path, e.what());
    }
  }
  if (g.seed) s.model.seed = *g.seed;
  s.model.validate();
  return s;
}

MemberGraph read_graph(const std::string& path, const Globals& g) {
  std::vector<std::string> warnings;
  LoadOptions opts{g.strict, &warnings};
  MemberGraph graph = load_graph_file(path, opts);
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return graph;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string join(const std::vector<double>& v, char sep = ' ') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += csv_num(v[i]);
  }
  return out;
}

json profile_json(const SpectralProfile& p) {
  return {{"eigenvalues", p.eigenvalues}, {"distribution", p.distribution}, {"entropy_bits", p.entropy_bits}};
}

json anchors_json(const MicrographParams& mp) {
  const AnchorTable t = anchor_table(mp);
  return {{"params", {{"n_static", mp.n_static}, {"n_main", mp.n_main}, {"k_abs", mp.k_abs}}},
          {"interface", t.interface},
          {"abstract_superclass", t.abstract_superclass},
          {"main_orchestrator", t.main_orchestrator},
          {"static_utility", t.static_utility}};
}

std::string micrograph_name(AnchorRole r, const MicrographParams& mp) {
  switch (r) {
    case AnchorRole::interface: return "edgeless";
    case AnchorRole::abstract_superclass: return "P" + std::to_string(mp.k_abs);
    case AnchorRole::main_orchestrator: return "S" + std::to_string(mp.n_main);
    case AnchorRole::static_utility: return "S" + std::to_string(mp.n_static);
  }
  return "";
}

std::string role_name(SpecialRole r) {
  switch (r) {
    case SpecialRole::abstract_superclass: return "abstract_superclass";
    case SpecialRole::interface: return "interface";
    case SpecialRole::main_orchestrator: return "main_orchestrator";
    case SpecialRole::static_utility: return "static_utility";
  }
  return "";
}

void report_anchors(const MicrographParams& mp, bool csv) {
  const AnchorTable t = anchor_table(mp);
  const SpecialRole order[] = {SpecialRole::interface, SpecialRole::abstract_superclass,
                               SpecialRole::static_utility, SpecialRole::main_orchestrator};
  if (csv) {
    std::cout << "symbol,ascii,role,micrograph,entropy_bits\n";
    for (auto r : order) {
      const RoleSymbol sym = RoleSymbol::special(r);
      std::cout << sym.glyph() << ',' << sym.ascii() << ',' << role_name(r) << ','
                << micrograph_name(anchor_role(r), mp) << ',' << csv_num(t.value(anchor_role(r))) << '\n';
    }
    std::cout << "A-Z,A-Z,generic,class graph," << kGenericRoleMarker << '\n';
    return;
  }
  json rows = json::array();
  for (auto r : order) {
    const RoleSymbol sym = RoleSymbol::special(r);
    rows.push_back({{"symbol", sym.glyph()}, {"ascii", sym.ascii()}, {"role", role_name(r)},
                    {"micrograph", micrograph_name(anchor_role(r), mp)},
                    {"entropy_bits", t.value(anchor_role(r))}});
  }
  rows.push_back({{"symbol", "A-Z"}, {"ascii", "A-Z"}, {"role", "generic"},
                  {"micrograph", "class graph"}, {"entropy_bits", kGenericRoleMarker}});
  emit({{"params", anchors_json(mp)["params"]}, {"rows", rows}});
}

json stability_json(const StabilityReport& s) {
  json j = {{"entropy_delta", s.entropy_delta}, {"l1_dist", s.l1_dist}};
  j["bound"] = s.theorem3_bound ? json(*s.theorem3_bound) : json("undefined");
  j["bound_satisfied"] = s.satisfied ? json(*s.satisfied) : json(nullptr);
  return j;
}

struct Comparison {
  SpectralProfile profile;
  double entropy_delta = 0.0;
  WeylReport weyl;
  StabilityReport stability;
};

Comparison compare(const MemberGraph& base, const MemberGraph& variant) {
  Comparison c;
  c.profile = profile(variant);
  c.entropy_delta = c.profile.entropy_bits - profile(base).entropy_bits;
  // Added or removed members become isolated vertices on the other side.
  const auto [a, b] = align_node_sets(base, variant);
  c.weyl = weyl_check(a, b);
  c.stability = entropy_stability_check(a, b);
  return c;
}

// Each op is applied cumulatively; every step is compared with its predecessor
// and with the original graph.
void perturb_scan(const MemberGraph& g, const std::string& ops, bool csv) {
  const auto list = parse_perturbation_list(ops, &g);
  const SpectralProfile base = profile(g);
  MemberGraph current = g;
  json steps = json::array();
  if (csv) std::cout << "step,op,nodes,edges,entropy_bits,delta_prev,delta_base,max_eig_shift,norm_bound,weyl_ok\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    MemberGraph next = apply_perturbation(current, list[i]);
    const Comparison c = compare(current, next);
    const double delta_base = c.profile.entropy_bits - base.entropy_bits;
    if (csv) {
      std::cout << i + 1 << ',' << describe(list[i]) << ',' << next.size() << ',' << next.edges().size()
                << ',' << csv_num(c.profile.entropy_bits) << ',' << csv_num(c.entropy_delta) << ','
                << csv_num(delta_base) << ',' << csv_num(c.weyl.max_eig_shift) << ','
                << csv_num(c.weyl.operator_norm_bound) << ',' << (c.weyl.satisfied ? "true" : "false") << '\n';
    } else {
      steps.push_back({{"step", i + 1},
                       {"op", describe(list[i])},
                       {"nodes", next.size()},
                       {"edges", next.edges().size()},
                       {"profile", profile_json(c.profile)},
                       {"entropy_delta_prev", c.entropy_delta},
                       {"entropy_delta_base", delta_base},
                       {"weyl", {{"max_eig_shift", c.weyl.max_eig_shift},
                                 {"norm_bound", c.weyl.operator_norm_bound},
                                 {"satisfied", c.weyl.satisfied}}},
                       {"stability", stability_json(c.stability)}});
    }
    current = std::move(next);
  }
  if (!csv) emit({{"class", g.class_name()}, {"base", profile_json(base)}, {"steps", steps}});
}

void report_locality(const MemberGraph& g, const std::vector<std::string>& variants, bool csv) {
  const SpectralProfile base = profile(g);
  if (csv) {
    std::cout << "variant,ops,entropy_bits,entropy_delta,max_eig_shift,norm_bound,weyl_ok,distribution\n";
    std::cout << "Base,," << csv_num(base.entropy_bits) << ",0,0,0,true," << join(base.distribution) << '\n';
  }
  json rows = json::array();
  rows.push_back({{"variant", "Base"}, {"ops", json::array()}, {"profile", profile_json(base)},
                  {"entropy_delta", 0.0}});
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto ops = parse_perturbation_list(variants[i], &g);
    const MemberGraph v = apply_perturbations(g, ops);
    const Comparison c = compare(g, v);
    const std::string name = "P" + std::to_string(i + 1);
    json described = json::array();
    for (const auto& op : ops) described.push_back(describe(op));
    if (csv) {
      std::string op_text;
      for (const auto& d : described) op_text += (op_text.empty() ? "" : ";") + d.get<std::string>();
      std::cout << name << ',' << op_text << ',' << csv_num(c.profile.entropy_bits) << ','
                << csv_num(c.entropy_delta) << ',' << csv_num(c.weyl.max_eig_shift) << ','
                << csv_num(c.weyl.operator_norm_bound) << ',' << (c.weyl.satisfied ? "true" : "false")
                << ',' << join(c.profile.distribution) << '\n';
    } else {
      rows.push_back({{"variant", name},
                      {"ops", described},
                      {"profile", profile_json(c.profile)},
                      {"entropy_delta", c.entropy_delta},
                      {"weyl", {{"max_eig_shift", c.weyl.max_eig_shift},
                                {"norm_bound", c.weyl.operator_norm_bound},
                                {"satisfied", c.weyl.satisfied}}},
                      {"stability", stability_json(c.stability)}});
    }
  }
  if (!csv) emit({{"class", g.class_name()}, {"variants", rows}});
}

// Raw triads: JSONL of {"label", "source", "events": [{"caller","context","callee"}]}.
// The entropy map is {"A": 1.2, "B": "graphs/B.json", ...}; a string value is
// a member graph whose spectral entropy is used.
EntropyMap read_entropy_map(const std::string& path, const Globals& g) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, path, "entropy map must be an object");
  EntropyMap map;
  for (const auto& [k, v] : j.items()) {
    const RoleSymbol sym = parse_role(k);
    if (v.is_number()) map[sym] = v.get<double>();
    else if (v.is_string()) map[sym] = profile(read_graph(v.get<std::string>(), g)).entropy_bits;
    else throw Error(ErrorCode::schema_violation, k, "expected number or graph path");
  }
  return map;
}

std::vector<BssSequence> enrich_file(std::istream& in, const EntropyMap& map, const EnrichOptions& base) {
  std::vector<BssSequence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema_violation, "line " + std::to_string(lineno), e.what());
    }
    try {
      EnrichOptions opts = base;
      if (j.contains("label") && !j["label"].is_null()) opts.label = j["label"].get<std::string>();
      opts.source = j.value("source", std::string("line-") + std::to_string(lineno));
      std::vector<RawEvent> events;
      for (const auto& e : j.at("events")) {
        events.push_back({parse_role(e.at("caller").get<std::string>()),
                          parse_context(e.at("context").get<std::string>()),
                          parse_role(e.at("callee").get<std::string>())});
      }
      out.push_back(enrich(events, map, opts));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema_violation, "line " + std::to_string(lineno), e.what());
    }
  }
  return out;
}

std::vector<BssSequence> read_corpus(const std::string& path, const LengthBounds& bounds = {}) {
  if (path == "-") return read_jsonl(std::cin, bounds);
  return read_jsonl_file(path, bounds);
}

ClassifierConfig with_seed(ClassifierConfig c, const Globals& g) {
  if (g.seed) c.seed = *g.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral role encoding and behavio-structural sequence classifier"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed; sub-seeds are derived from it");
  app.add_flag("--csv", g.csv, "CSV output for reports");
  app.add_option("--config", g.config_path, "Config JSON (falls back to SEER_CONFIG)");
  app.add_flag("--strict", g.strict, "Reject unknown fields in graph JSON");

  std::string graph_path, ops, corpus_path, raw_path, entropy_path, ckpt_path, out_path, csv_out;
  std::vector<std::string> variants;
  std::optional<int> n_static_flag, n_main_flag, k_abs_flag;
  int count = 1000, n_min = 6, n_max = 10, classes = 4, per_class = 50, per_source = 10, factor = 1;
  int total = 0, min_len = 8, max_len_events = 50, n_params = 200;
  double edge_prob = 0.3, epsilon = 1e-5;
  std::size_t tok_len = 151;
  std::string vocab_mode = "corpus", ablate_variants = "all";

  auto* entropy = app.add_subcommand("entropy", "Laplacian spectrum and spectral entropy of a member graph");
  entropy->add_option("graph", graph_path, "Graph JSON")->required();

  auto add_micro = [&](CLI::App* sub) {
    sub->add_option("--n-static", n_static_flag, "Static-utility star size");
    sub->add_option("--n-main", n_main_flag, "Main-orchestrator star size");
    sub->add_option("--k-abs", k_abs_flag, "Abstract-superclass path length");
  };
  auto* anchors = app.add_subcommand("anchors", "Anchor entropies from canonical micrographs");
  add_micro(anchors);
  auto* rep_anchors = app.add_subcommand("report-anchors", "Anchor table with symbols and micrographs");
  add_micro(rep_anchors);

  auto* pscan = app.add_subcommand("perturb-scan", "Apply perturbations cumulatively and track the spectrum");
  pscan->add_option("graph", graph_path, "Graph JSON")->required();
  pscan->add_option("--ops", ops, "Ops separated by ';', e.g. add_edge:a:b;remove_node:c")->required();

  auto* locality = app.add_subcommand("report-locality", "Base vs perturbed variants P1, P2, ...");
  locality->add_option("graph", graph_path, "Graph JSON")->required();
  locality->add_option("--variant", variants, "Op list of one variant (repeatable)");

  auto* cscan = app.add_subcommand("cospectral-scan", "Count non-isomorphic cospectral pairs among random graphs");
  cscan->add_option("--count", count, "Number of graphs");
  cscan->add_option("--n-min", n_min);
  cscan->add_option("--n-max", n_max);
  cscan->add_option("--p", edge_prob, "Edge probability");

  auto* enrich_cmd = app.add_subcommand("enrich", "Attach entropies and durations to raw triads");
  enrich_cmd->add_option("input", raw_path, "Raw triad JSONL ('-' for stdin)")->required();
  enrich_cmd->add_option("--entropy", entropy_path, "Symbol -> bits (or graph path) JSON")->required();
  enrich_cmd->add_option("--min-len", min_len, "Minimum events per sequence");
  enrich_cmd->add_option("--max-len", max_len_events, "Maximum events per sequence");

  auto* augment_cmd = app.add_subcommand("augment", "Role-permutation augmentation");
  augment_cmd->add_option("input", corpus_path, "Corpus JSONL ('-' for stdin)")->required();
  augment_cmd->add_option("--factor", factor, "Augmented copies per sequence");

  auto* synth = app.add_subcommand("synth", "Synthetic labeled corpus");
  synth->add_option("--classes", classes);
  synth->add_option("--per-class", per_class);
  synth->add_option("--total", total, "Total sequences (overrides classes * per-class)");
  synth->add_option("--per-source", per_source, "Sequences per synthetic source project");

  auto* tok = app.add_subcommand("tokenize", "Token ids, mask and side channel per sequence");
  tok->add_option("input", corpus_path, "Corpus JSONL ('-' for stdin)")->required();
  tok->add_option("--max-len", tok_len, "Token length including CLS");
  tok->add_option("--vocab", vocab_mode, "corpus | full")->check(CLI::IsMember({"corpus", "full"}));

  auto* train_cmd = app.add_subcommand("train", "Train the toy classifier on a source-level split");
  train_cmd->add_option("--corpus", corpus_path)->required();
  train_cmd->add_option("--out", out_path, "Checkpoint path");
  train_cmd->add_option("--confusion-csv", csv_out, "Also write the confusion matrix as CSV");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--ckpt", ckpt_path)->required();
  eval_cmd->add_option("--corpus", corpus_path)->required();

  auto* gcheck = app.add_subcommand("gradcheck", "Analytic vs numeric gradients");
  gcheck->add_option("--corpus", corpus_path, "Sample source (default: synthetic corpus)");
  gcheck->add_option("--epsilon", epsilon);
  gcheck->add_option("--params", n_params, "Parameters sampled per check");

  auto* ablate_cmd = app.add_subcommand("ablate", "Role/time ablation on one split");
  ablate_cmd->add_option("--corpus", corpus_path)->required();
  ablate_cmd->add_option("--variants", ablate_variants, "all or a comma list of baseline,time-only,roles-only,both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help / version exit 0, everything else is a usage error
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const Settings settings = load_settings(g);
    // flags win over the config file
    MicrographParams mp = settings.micrographs;
    if (n_static_flag) mp.n_static = *n_static_flag;
    if (n_main_flag) mp.n_main = *n_main_flag;
    if (k_abs_flag) mp.k_abs = *k_abs_flag;
    if (anchors->parsed()) {
      emit(anchors_json(mp));
    } else if (rep_anchors->parsed()) {
      report_anchors(mp, g.csv);
    } else if (entropy->parsed()) {
      const MemberGraph graph = read_graph(graph_path, g);
      json j = profile_json(profile(graph));
      j["class"] = graph.class_name();
      j["nodes"] = graph.size();
      j["edges"] = graph.edges().size();
      emit(j);
    } else if (pscan->parsed()) {
      perturb_scan(read_graph(graph_path, g), ops, g.csv);
    } else if (locality->parsed()) {
      report_locality(read_graph(graph_path, g), variants, g.csv);
    } else if (cscan->parsed()) {
      CospectralScanParams p;
      p.n_graphs = count;
      p.n_min = n_min;
      p.n_max = n_max;
      p.edge_prob = edge_prob;
      if (g.seed) p.seed = *g.seed;
      const CospectralReport r = cospectrality_scan(p);
      if (g.csv) {
        std::cout << "graphs,pairs_checked,isomorphic_pairs,cospectral_noniso_pairs,collision_rate\n"
                  << r.graphs << ',' << r.pairs_checked << ',' << r.isomorphic_pairs << ','
                  << r.cospectral_noniso_pairs << ',' << csv_num(r.collision_rate) << '\n';
      } else {
        emit({{"graphs", r.graphs}, {"n_min", n_min}, {"n_max", n_max}, {"edge_prob", edge_prob},
              {"seed", p.seed}, {"pairs_checked", r.pairs_checked}, {"isomorphic_pairs", r.isomorphic_pairs},
              {"cospectral_noniso_pairs", r.cospectral_noniso_pairs}, {"collision_rate", r.collision_rate}});
      }
    } else if (enrich_cmd->parsed()) {
      if (min_len < 1 || max_len_events < min_len) throw Error(ErrorCode::invalid_parameter, "--min-len/--max-len");
      EnrichOptions opts;
      opts.anchors = anchor_table(settings.micrographs);
      opts.timing = settings.timing;
      opts.bounds = {static_cast<std::size_t>(min_len), static_cast<std::size_t>(max_len_events)};
      const EntropyMap map = read_entropy_map(entropy_path, g);
      std::vector<BssSequence> out;
      if (raw_path == "-") {
        out = enrich_file(std::cin, map, opts);
      } else {
        std::ifstream in(raw_path);
        if (!in) throw Error(ErrorCode::io_failure, raw_path, "cannot open");
        out = enrich_file(in, map, opts);
      }
      write_jsonl(std::cout, out);
    } else if (augment_cmd->parsed()) {
      if (factor < 0) throw Error(ErrorCode::invalid_parameter, "--factor");
      const auto corpus = read_corpus(corpus_path);
      const std::uint64_t seed = g.seed.value_or(settings.model.seed);
      std::vector<BssSequence> out;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        out.push_back(corpus[i]);
        for (int k = 0; k < factor; ++k) {
          out.push_back(augment(corpus[i], derive_seed(derive_seed(seed, i), static_cast<std::uint64_t>(k))));
        }
      }
      write_jsonl(std::cout, out);
    } else if (synth->parsed()) {
      SynthSpec spec;
      spec.n_classes = classes;
      spec.per_class = per_class;
      if (total > 0) spec.total = total;
      spec.per_source = per_source;
      spec.seed = g.seed.value_or(spec.seed);
      spec.timing = settings.timing;
      spec.micrographs = settings.micrographs;
      write_jsonl(std::cout, synth_corpus(spec));
    } else if (tok->parsed()) {
      const auto corpus = read_corpus(corpus_path);
      const Vocabulary vocab = vocab_mode == "full" ? full_vocabulary() : build_vocab(corpus);
      for (const auto& s : corpus) {
        const TokenizedSequence t = tokenize(s, vocab, tok_len);
        json side = json::array();
        for (const auto& v : t.side_channel) side.push_back({v[0], v[1], v[2]});
        std::vector<int> mask(t.attention_mask.begin(), t.attention_mask.end());
        std::cout << json{{"source", s.source}, {"ids", t.ids}, {"attention_mask", mask}, {"side_channel", side}}.dump()
                  << '\n';
      }
      std::cerr << "vocabulary: " << vocab.size() << " tokens\n";
    } else if (train_cmd->parsed()) {
      const auto corpus = read_corpus(corpus_path);
      const TrainResult r = train(corpus, settings.model);
      if (!out_path.empty()) save_checkpoint_file(out_path, r.trained);
      if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        if (!f) throw Error(ErrorCode::io_failure, csv_out, "cannot open for writing");
        f << confusion_csv(r.report.metrics, r.report.labels);
      }
      for (const auto& w : r.report.metrics.warnings) std::cerr << "warning: " << w << '\n';
      if (g.csv) std::cout << confusion_csv(r.report.metrics, r.report.labels);
      else emit(to_json(r.report));
    } else if (eval_cmd->parsed()) {
      const TrainedModel m = load_checkpoint_file(ckpt_path);
      const Metrics metrics = evaluate(m, read_corpus(corpus_path));
      for (const auto& w : metrics.warnings) std::cerr << "warning: " << w << '\n';
      if (g.csv) std::cout << confusion_csv(metrics, m.labels);
      else emit(to_json(metrics, m.labels));
    } else if (gcheck->parsed()) {
      if (n_params < 1) throw Error(ErrorCode::invalid_parameter, "--params");
      std::vector<BssSequence> corpus;
      if (corpus_path.empty()) {
        SynthSpec spec;
        spec.n_classes = settings.model.n_classes;
        spec.per_class = 1;
        spec.seed = settings.model.seed;
        corpus = synth_corpus(spec);
      } else {
        corpus = read_corpus(corpus_path);
      }
      ClassifierConfig c = settings.model;
      const auto labels = label_set(corpus);
      c.n_classes = static_cast<int>(labels.size());
      const Vocabulary vocab = build_vocab(corpus);
      const ToyModel model = ToyModel::create(c, vocab.size(), choose_omega(corpus_stats(corpus)),
                                              derive_seed(c.seed, "init"));
      const BssSequence& s = corpus.front();
      const int label = static_cast<int>(std::find(labels.begin(), labels.end(), *s.label) - labels.begin());
      const LabeledSample sample{tokenize(s, vocab, c.max_len), label};
      const std::uint64_t pick = derive_seed(c.seed, "gradcheck");
      const auto full = grad_check(model, sample, epsilon, static_cast<std::size_t>(n_params), pick);
      const auto head = grad_check(model, sample, epsilon, static_cast<std::size_t>(n_params), pick, "head.");
      auto rep = [](const GradCheckReport& r) {
        return json{{"max_rel_error", r.max_rel_error}, {"max_abs_error", r.max_abs_error},
                    {"checked", r.checked}, {"worst_tensor", r.worst_tensor}};
      };
      emit({{"epsilon", epsilon}, {"full", rep(full)}, {"head", rep(head)}});
    } else if (ablate_cmd->parsed()) {
      std::vector<std::string> wanted;
      if (ablate_variants != "all") {
        std::stringstream ss(ablate_variants);
        for (std::string v; std::getline(ss, v, ',');) wanted.push_back(v);
      }
      const ClassifierConfig c = with_seed(settings.model, g);
      const auto corpus = read_corpus(corpus_path);
      const auto split = split_by_source(corpus, kTestFraction, derive_seed(c.seed, "split"));
      const auto rows = ablate(split, c, wanted);
      if (g.csv) {
        std::cout << "variant,roles,time,accuracy,macro_f1,precision,recall\n";
        for (const auto& r : rows) {
          std::cout << r.variant << ',' << r.roles << ',' << r.time << ',' << csv_num(r.metrics.accuracy) << ','
                    << csv_num(r.metrics.macro_f1) << ',' << csv_num(r.metrics.macro_precision) << ','
                    << csv_num(r.metrics.macro_recall) << '\n';
        }
      } else {
        emit(to_json(rows));
      }
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.code())}, {"subject", e.subject()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "schema_violation"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
