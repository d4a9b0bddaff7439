#include "sat/graph/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "sat/errors.hpp"

namespace sat::graph {

using json = nlohmann::json;

void validate_ratios(const std::array<double, 3>& ratios) {
  for (double r : ratios) {
    if (!(r >= 0.0)) throw ConfigError("split ratios must be non-negative");
  }
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1, got " + std::to_string(total));
  }
}

namespace {

std::size_t floor_share(double ratio, std::size_t n) {
  // guard against 0.4 * 10 evaluating to 3.9999999999999996
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

// Largest-remainder apportionment of n items; ties go to the earlier share.
std::array<std::size_t, 3> apportion(const std::array<double, 3>& ratios, std::size_t n) {
  std::array<std::size_t, 3> out{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    out[i] = floor_share(ratios[i], n);
    frac[i] = ratios[i] * static_cast<double>(n) - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; assigned < n; ++k, ++assigned) ++out[order[k % 3]];
  return out;
}

}  // namespace

NodeSplit make_node_split(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto sizes = apportion(ratios, n);
  const std::size_t n_obs = sizes[0];
  const std::size_t n_miss = sizes[2];
  NodeSplit s;
  s.seed = seed;
  s.observed.assign(order.begin(), order.begin() + n_obs);
  s.missing.assign(order.begin() + n_obs, order.begin() + n_obs + n_miss);
  s.validation.assign(order.begin() + n_obs + n_miss, order.end());
  std::sort(s.observed.begin(), s.observed.end());
  std::sort(s.missing.begin(), s.missing.end());
  std::sort(s.validation.begin(), s.validation.end());
  return s;
}

void check_partition(const NodeSplit& s, std::size_t n) {
  std::vector<int> hits(n, 0);
  for (const auto* set : {&s.observed, &s.validation, &s.missing}) {
    for (std::size_t v : *set) {
      if (v >= n) throw DataError("split node " + std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
      ++hits[v];
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (hits[v] != 1) throw DataError("split is not a partition at node " + std::to_string(v));
  }
}

LinkSplit make_link_split(const AttributedGraph& g, std::array<double, 3> ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  const std::size_t m = g.edges.size();
  if (m < 5) throw DataError("link split needs at least 5 edges, graph has " + std::to_string(m));
  std::vector<Edge> edges = g.edges;
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  const std::size_t n_train = floor_share(ratios[0], m);
  const std::size_t n_val = floor_share(ratios[1], m);
  LinkSplit s;
  s.seed = seed;
  s.train_pos.assign(edges.begin(), edges.begin() + n_train);
  s.val_pos.assign(edges.begin() + n_train, edges.begin() + n_train + n_val);
  s.test_pos.assign(edges.begin() + n_train + n_val, edges.end());

  const std::size_t n = g.n_nodes;
  const std::size_t needed = s.val_pos.size() + s.test_pos.size();
  const std::size_t pool = n * (n - 1) / 2 - m;
  if (pool < needed) {
    throw DataError("graph too dense to sample " + std::to_string(needed) + " non-edges (pool holds " +
                    std::to_string(pool) + ")");
  }
  std::unordered_set<std::size_t> taken;
  taken.reserve(2 * (m + needed));
  for (const Edge& e : g.edges) taken.insert(e.u * n + e.v);
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::vector<Edge> negatives;
  negatives.reserve(needed);
  const std::size_t budget = 100 * needed;
  for (std::size_t attempt = 0; negatives.size() < needed; ++attempt) {
    if (attempt >= budget) {
      throw DataError("negative sampling exhausted its attempt budget after " + std::to_string(budget) +
                      " draws; graph too dense");
    }
    const std::size_t a = node(rng);
    const std::size_t b = node(rng);
    if (a == b) continue;
    const Edge e = make_edge(a, b);
    if (taken.insert(e.u * n + e.v).second) negatives.push_back(e);
  }
  s.val_neg.assign(negatives.begin(), negatives.begin() + s.val_pos.size());
  s.test_neg.assign(negatives.begin() + s.val_pos.size(), negatives.end());
  return s;
}

namespace {

json edges_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (const Edge& e : edges) a.push_back({e.u, e.v});
  return a;
}

std::vector<Edge> edges_from(const json& a) {
  std::vector<Edge> out;
  for (const auto& p : a) out.push_back(make_edge(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()));
  return out;
}

}  // namespace

void save_split(const SplitFile& s, const std::filesystem::path& path) {
  json j;
  if (s.node) {
    j["node"] = {{"seed", s.node->seed},
                 {"observed", s.node->observed},
                 {"validation", s.node->validation},
                 {"missing", s.node->missing}};
  }
  if (s.link) {
    j["link"] = {{"seed", s.link->seed},
                 {"train_pos", edges_json(s.link->train_pos)},
                 {"val_pos", edges_json(s.link->val_pos)},
                 {"test_pos", edges_json(s.link->test_pos)},
                 {"val_neg", edges_json(s.link->val_neg)},
                 {"test_neg", edges_json(s.link->test_neg)}};
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

SplitFile load_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  SplitFile s;
  try {
    const json j = json::parse(in);
    if (j.contains("node")) {
      const json& n = j["node"];
      s.node = NodeSplit{n.at("observed").get<std::vector<std::size_t>>(),
                         n.at("validation").get<std::vector<std::size_t>>(),
                         n.at("missing").get<std::vector<std::size_t>>(), n.at("seed").get<std::uint64_t>()};
    }
    if (j.contains("link")) {
      const json& l = j["link"];
      s.link = LinkSplit{edges_from(l.at("train_pos")), edges_from(l.at("val_pos")), edges_from(l.at("test_pos")),
                         edges_from(l.at("val_neg")),   edges_from(l.at("test_neg")), l.at("seed").get<std::uint64_t>()};
    }
  } catch (const json::exception& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
  if (!s.node && !s.link) throw DataError(path.filename().string() + ": holds neither a node nor a link split");
  return s;
}

}  // namespace sat::graph
