#include "sat/cli/methods.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "sat/errors.hpp"

namespace sat::cli {

std::string to_string(Method m) {
  switch (m) {
    case Method::SatGcn: return "sat-gcn";
    case Method::SatGat: return "sat-gat";
    case Method::SatNoSelf: return "sat-no-self";
    case Method::SatNoCross: return "sat-no-cross";
    case Method::SatNoAdver: return "sat-no-adver";
    case Method::NeighAggre: return "neighaggre";
    case Method::Vae: return "vae";
    case Method::GnnGcn: return "gnn-gcn";
    case Method::GnnGat: return "gnn-gat";
  }
  throw std::logic_error("unknown method");
}

Method parse_method(const std::string& s) {
  std::string names;
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
    names += (names.empty() ? "" : ", ") + to_string(m);
  }
  throw ConfigError("unknown method '" + s + "' (expected one of " + names + ")");
}

bool uses_sat_model(Method m) { return m != Method::NeighAggre && m != Method::Vae; }

bool supports(Method m, model::Task task) {
  if (task == model::Task::Completion) return true;
  switch (m) {
    case Method::SatGcn:
    case Method::SatGat:
    case Method::SatNoSelf:
    case Method::SatNoCross:
    case Method::SatNoAdver: return true;
    default: return false;
  }
}

void require_supported(Method m, model::Task task) {
  if (!supports(m, task)) {
    throw ConfigError("method " + to_string(m) + " does not support the " + model::to_string(task) + " task");
  }
}

double default_lambda_c(const std::string& dataset, model::Task task) {
  static const std::map<std::string, std::pair<double, double>> table = {
      {"cora", {10.0, 10.0}},          {"citeseer", {10.0, 10.0}},       {"pubmed", {50.0, 1.0}},
      {"steam", {10.0, 10.0}},         {"coauthor-cs", {100.0, 0.1}},    {"amazon-computer", {100.0, 0.1}},
      {"amazon-photo", {100.0, 0.1}},
  };
  std::string key = dataset;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(key.begin(), key.end(), '_', '-');
  const auto it = table.find(key);
  if (it == table.end()) return 10.0;
  return task == model::Task::Completion ? it->second.first : it->second.second;
}

std::vector<std::size_t> default_ks(const std::string& dataset) {
  std::string key = dataset;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  if (key == "steam") return {3, 5, 10};
  return {10, 20, 50};
}

model::TrainConfig method_config(Method m, model::TrainConfig c) {
  using model::Backbone;
  switch (m) {
    case Method::SatGcn: c.backbone = Backbone::GCN; break;
    case Method::SatGat: c.backbone = Backbone::GAT; break;
    case Method::SatNoSelf:
      c.backbone = Backbone::GCN;
      c.terms.self_x = c.terms.self_a = false;
      break;
    case Method::SatNoCross:
      c.backbone = Backbone::GCN;
      c.terms.cross_x = c.terms.cross_a = false;
      break;
    case Method::SatNoAdver:
      c.backbone = Backbone::GCN;
      c.terms.adversarial = false;
      break;
    case Method::GnnGcn: return baselines::gnn_regression_config(c, Backbone::GCN);
    case Method::GnnGat: return baselines::gnn_regression_config(c, Backbone::GAT);
    case Method::NeighAggre:
    case Method::Vae: throw std::logic_error(to_string(m) + " is not trained through the SAT loop");
  }
  return c;
}

}  // namespace sat::cli
