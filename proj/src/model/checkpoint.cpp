#include "sat/model/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sat/errors.hpp"

namespace sat::model {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'A', 'T', 'C', 'K', 'P', 'T', '1'};

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  nlohmann::json header{{"kind", c.kind}, {"meta", c.meta}, {"epoch", c.epoch}, {"score", c.score}};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, t] : c.tensors) list.push_back({{"name", name}, {"shape", t.shape()}});
  header["tensors"] = std::move(list);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, t] : c.tensors) {
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  const std::string where = path.string() + ": ";
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw DataError(where + "not a checkpoint file");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len > (1u << 26)) throw DataError(where + "bad header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw DataError(where + "truncated header");

  Checkpoint c;
  try {
    const auto header = nlohmann::json::parse(text);
    c.kind = header.at("kind").get<std::string>();
    c.meta = header.at("meta");
    c.epoch = header.at("epoch").get<int>();
    c.score = header.at("score").get<double>();
    for (const auto& t : header.at("tensors")) {
      Tensor value(t.at("shape").get<num::Shape>());
      c.tensors.emplace_back(t.at("name").get<std::string>(), std::move(value));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + "bad header: " + e.what());
  }
  for (auto& [name, t] : c.tensors) {
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in) throw DataError(where + "truncated data for " + name);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError(where + "trailing bytes");
  return c;
}

Checkpoint sat_checkpoint(const SatModel& m, const TrainConfig& cfg, int epoch, double score) {
  Checkpoint c;
  c.kind = "sat";
  const ModelDims& d = m.dims();
  c.meta = {{"config", to_json(cfg)},
            {"dims",
             {{"n_nodes", d.n_nodes},
              {"n_attrs", d.n_attrs},
              {"hidden", d.hidden},
              {"latent", d.latent},
              {"edge_dim", d.edge_dim}}}};
  c.epoch = epoch;
  c.score = score;
  for (const Parameter& p : m.params()) c.tensors.emplace_back(p.name, p.value);
  return c;
}

LoadedSat sat_model_from_checkpoint(const Checkpoint& c) {
  if (c.kind != "sat") throw DataError("checkpoint holds a '" + c.kind + "' model, expected 'sat'");
  LoadedSat out;
  ModelDims d;
  try {
    out.config = train_config_from_json(c.meta.at("config"));
    const auto& j = c.meta.at("dims");
    d.n_nodes = j.at("n_nodes").get<std::size_t>();
    d.n_attrs = j.at("n_attrs").get<std::size_t>();
    d.hidden = j.at("hidden").get<std::size_t>();
    d.latent = j.at("latent").get<std::size_t>();
    d.edge_dim = j.at("edge_dim").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint metadata: ") + e.what());
  }
  out.model = std::make_unique<SatModel>(d, out.config.backbone, out.config.dropout, out.config.seed,
                                         out.config.gat_slope);
  for (Parameter& p : out.model->params()) {
    const Tensor* t = c.find(p.name);
    if (!t) throw DataError("checkpoint lacks parameter " + p.name);
    if (t->shape() != p.value.shape()) throw DataError("checkpoint shape mismatch for " + p.name);
    p.value = *t;
  }
  out.epoch = c.epoch;
  out.score = c.score;
  return out;
}

}  // namespace sat::model
