#include "seer/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "seer/error.hpp"

namespace seer {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr std::size_t kMagicLen = sizeof(kCheckpointMagic) - 1;

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::io_failure, "checkpoint", "truncated header");
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const TrainedModel& m) {
  json header;
  header["config"] = to_json(m.model.config);
  header["omega"] = m.model.fusion.omega;
  header["vocab"] = m.vocab.tokens();
  header["labels"] = m.labels;
  json list = json::array();
  std::uint64_t offset = 0;
  const auto ts = tensors(m.model.params);
  for (const auto& t : ts) {
    list.push_back({{"name", t.name}, {"rows", t.value->rows()}, {"cols", t.value->cols()}, {"offset", offset}});
    offset += static_cast<std::uint64_t>(t.value->size()) * sizeof(double);
  }
  header["tensors"] = list;
  const std::string text = header.dump();
  out.write(kCheckpointMagic, kMagicLen);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& t : ts) {
    out.write(reinterpret_cast<const char*>(t.value->data()),
              static_cast<std::streamsize>(t.value->size() * sizeof(double)));
  }
  if (!out) throw Error(ErrorCode::io_failure, "checkpoint", "write failed");
}

void save_checkpoint_file(const std::string& path, const TrainedModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, path, "cannot open for writing");
  save_checkpoint(out, m);
}

TrainedModel load_checkpoint(std::istream& in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kCheckpointMagic, kMagicLen) != 0) {
    throw Error(ErrorCode::io_failure, "checkpoint", "bad magic");
  }
  const std::uint64_t len = read_u64(in);
  if (len > (1u << 26)) throw Error(ErrorCode::io_failure, "checkpoint", "header too large");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) {
    throw Error(ErrorCode::io_failure, "checkpoint", "truncated header");
  }
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io_failure, "checkpoint", e.what());
  }

  TrainedModel m;
  try {
    const ClassifierConfig config = classifier_config_from_json(header.at("config"));
    m.vocab = Vocabulary::from_tokens(header.at("vocab").get<std::vector<std::string>>());
    m.labels = header.at("labels").get<std::vector<std::string>>();
    if (static_cast<int>(m.labels.size()) != config.n_classes) {
      throw Error(ErrorCode::shape_mismatch, "labels", "count differs from n_classes");
    }
    m.model = ToyModel::create(config, m.vocab.size(), header.at("omega").get<double>(), 0);
    auto ts = tensors(m.model.params);
    const auto& list = header.at("tensors");
    if (list.size() != ts.size()) throw Error(ErrorCode::shape_mismatch, "tensors", "tensor count");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto& e = list[i];
      if (e.at("name").get<std::string>() != ts[i].name ||
          e.at("rows").get<Eigen::Index>() != ts[i].value->rows() ||
          e.at("cols").get<Eigen::Index>() != ts[i].value->cols()) {
        throw Error(ErrorCode::shape_mismatch, ts[i].name);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io_failure, "checkpoint", e.what());
  }
  for (auto& t : tensors(m.model.params)) {
    if (!in.read(reinterpret_cast<char*>(t.value->data()),
                 static_cast<std::streamsize>(t.value->size() * sizeof(double)))) {
      throw Error(ErrorCode::io_failure, t.name, "truncated tensor data");
    }
  }
  return m;
}

TrainedModel load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, path, "cannot open");
  return load_checkpoint(in);
}

}  // namespace seer
