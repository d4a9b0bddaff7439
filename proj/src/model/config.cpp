#include "sat/model/config.hpp"

#include <set>

#include "sat/errors.hpp"

namespace sat::model {

using nlohmann::json;

std::string to_string(Backbone b) { return b == Backbone::GCN ? "gcn" : "gat"; }
std::string to_string(Task t) { return t == Task::Completion ? "completion" : "link"; }

std::string to_string(Selection s) {
  switch (s) {
    case Selection::Auto: return "auto";
    case Selection::Recall10: return "recall@10";
    case Selection::Mse: return "mse";
    case Selection::Auc: return "auc";
  }
  return "auto";
}

Backbone parse_backbone(const std::string& s) {
  if (s == "gcn") return Backbone::GCN;
  if (s == "gat") return Backbone::GAT;
  throw ConfigError("unknown backbone '" + s + "' (expected gcn or gat)");
}

Task parse_task(const std::string& s) {
  if (s == "completion") return Task::Completion;
  if (s == "link" || s == "link_prediction") return Task::LinkPrediction;
  throw ConfigError("unknown task '" + s + "' (expected completion or link)");
}

Selection parse_selection(const std::string& s) {
  if (s == "auto") return Selection::Auto;
  if (s == "recall@10") return Selection::Recall10;
  if (s == "mse") return Selection::Mse;
  if (s == "auc") return Selection::Auc;
  throw ConfigError("unknown selection metric '" + s + "'");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(lambda_c >= 0.0, "lambda_c must be non-negative");
  require(!terms.any_cross() || lambda_c > 0.0, "lambda_c must be positive when cross terms are enabled");
  require(lr > 0.0, "learning rate must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(max_epochs >= 1, "max_epochs must be at least 1");
  require(gen_steps >= 1, "gen_steps must be at least 1");
  require(disc_steps >= 1, "disc_steps must be at least 1");
  require(hidden > 0 && latent > 0 && edge_dim > 0, "layer widths must be positive");
  require(terms.self_x || terms.self_a || terms.cross_x || terms.cross_a, "at least one reconstruction term is required");
  require(mmd_every >= 0, "mmd_every must be non-negative");
  require(mmd_sample >= 2, "mmd_sample must be at least 2");
}

json to_json(const TrainConfig& c) {
  return json{{"lambda_c", c.lambda_c},
              {"lr", c.lr},
              {"dropout", c.dropout},
              {"max_epochs", c.max_epochs},
              {"gen_steps", c.gen_steps},
              {"disc_steps", c.disc_steps},
              {"seed", c.seed},
              {"hidden", c.hidden},
              {"latent", c.latent},
              {"edge_dim", c.edge_dim},
              {"backbone", to_string(c.backbone)},
              {"task", to_string(c.task)},
              {"selection", to_string(c.selection)},
              {"terms",
               {{"self_x", c.terms.self_x},
                {"self_a", c.terms.self_a},
                {"cross_x", c.terms.cross_x},
                {"cross_a", c.terms.cross_a},
                {"adversarial", c.terms.adversarial}}},
              {"saturating_generator", c.saturating_generator},
              {"cross_a_all_nodes", c.cross_a_all_nodes},
              {"gat_slope", c.gat_slope},
              {"mmd_every", c.mmd_every},
              {"mmd_sample", c.mmd_sample}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  static const std::set<std::string> known{
      "lambda_c", "lr",        "dropout",   "max_epochs", "gen_steps", "disc_steps",           "seed",
      "hidden",   "latent",    "edge_dim",  "backbone",   "task",      "selection",            "terms",
      "saturating_generator",  "cross_a_all_nodes",       "gat_slope", "mmd_every",            "mmd_sample"};
  if (!j.is_object()) throw ConfigError("training config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ConfigError("unknown training config key '" + key + "'");
    }
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("lambda_c", c.lambda_c);
    get("lr", c.lr);
    get("dropout", c.dropout);
    get("max_epochs", c.max_epochs);
    get("gen_steps", c.gen_steps);
    get("disc_steps", c.disc_steps);
    get("seed", c.seed);
    get("hidden", c.hidden);
    get("latent", c.latent);
    get("edge_dim", c.edge_dim);
    if (j.contains("backbone")) c.backbone = parse_backbone(j.at("backbone").get<std::string>());
    if (j.contains("task")) c.task = parse_task(j.at("task").get<std::string>());
    if (j.contains("selection")) c.selection = parse_selection(j.at("selection").get<std::string>());
    if (j.contains("terms")) {
      const json& t = j.at("terms");
      for (const auto& [key, value] : t.items()) {
        if (key != "self_x" && key != "self_a" && key != "cross_x" && key != "cross_a" && key != "adversarial") {
          throw ConfigError("unknown loss term '" + key + "'");
        }
      }
      if (t.contains("self_x")) c.terms.self_x = t.at("self_x").get<bool>();
      if (t.contains("self_a")) c.terms.self_a = t.at("self_a").get<bool>();
      if (t.contains("cross_x")) c.terms.cross_x = t.at("cross_x").get<bool>();
      if (t.contains("cross_a")) c.terms.cross_a = t.at("cross_a").get<bool>();
      if (t.contains("adversarial")) c.terms.adversarial = t.at("adversarial").get<bool>();
    }
    get("saturating_generator", c.saturating_generator);
    get("cross_a_all_nodes", c.cross_a_all_nodes);
    get("gat_slope", c.gat_slope);
    get("mmd_every", c.mmd_every);
    get("mmd_sample", c.mmd_sample);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed training config: ") + e.what());
  }
  return c;
}

}  // namespace sat::model
