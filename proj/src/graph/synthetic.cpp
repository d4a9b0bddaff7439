#include "sat/graph/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "sat/errors.hpp"

namespace sat::graph {

AttributedGraph make_sbm(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution in(p_in), out(p_out);
  AttributedGraph g;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    for (std::size_t i = 0; i < block_sizes[b]; ++i) g.labels.push_back(static_cast<int>(b));
  }
  g.n_nodes = g.labels.size();
  g.class_count = block_sizes.size();
  for (std::size_t u = 0; u < g.n_nodes; ++u) {
    for (std::size_t v = u + 1; v < g.n_nodes; ++v) {
      const bool same = g.labels[u] == g.labels[v];
      if (same ? in(rng) : out(rng)) g.edges.push_back({u, v});
    }
  }
  std::vector<num::SparseEntry> attrs;
  for (std::size_t u = 0; u < g.n_nodes; ++u) attrs.push_back({u, static_cast<std::size_t>(g.labels[u]), 1.0});
  g.attributes = num::SparseMatrix(g.n_nodes, block_sizes.size(), std::move(attrs));
  g.attr_kind = AttrKind::Categorical;
  g.validate();
  return g;
}

AttributedGraph make_citation_like(const CitationLikeOptions& opt, std::uint64_t seed) {
  if (opt.n_classes == 0 || opt.n_attrs < opt.n_classes || opt.attrs_per_node > opt.n_attrs / opt.n_classes) {
    throw ConfigError("make_citation_like: inconsistent size options");
  }
  std::mt19937_64 rng(seed);
  AttributedGraph g;
  g.n_nodes = opt.n_nodes;
  g.class_count = opt.n_classes;
  g.labels.resize(opt.n_nodes);
  for (std::size_t i = 0; i < opt.n_nodes; ++i) g.labels[i] = static_cast<int>(i % opt.n_classes);
  std::shuffle(g.labels.begin(), g.labels.end(), rng);

  std::vector<std::vector<std::size_t>> members(opt.n_classes);
  for (std::size_t i = 0; i < opt.n_nodes; ++i) members[static_cast<std::size_t>(g.labels[i])].push_back(i);

  std::uniform_int_distribution<std::size_t> any_node(0, opt.n_nodes - 1);
  std::bernoulli_distribution stay(opt.homophily);
  const auto target = static_cast<std::size_t>(opt.avg_degree * static_cast<double>(opt.n_nodes) / 2.0);
  std::set<Edge> edges;
  // a spanning chain inside each class keeps every node connected to its own class
  for (const auto& m : members) {
    for (std::size_t k = 1; k < m.size(); ++k) edges.insert(make_edge(m[k - 1], m[k]));
  }
  while (edges.size() < target) {
    const std::size_t u = any_node(rng);
    std::size_t v;
    if (stay(rng)) {
      const auto& m = members[static_cast<std::size_t>(g.labels[u])];
      v = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
    } else {
      v = any_node(rng);
    }
    if (u != v) edges.insert(make_edge(u, v));
  }
  g.edges.assign(edges.begin(), edges.end());

  const std::size_t slice = opt.n_attrs / opt.n_classes;
  std::bernoulli_distribution from_class(opt.attr_class_bias);
  std::uniform_int_distribution<std::size_t> any_dim(0, opt.n_attrs - 1);
  std::uniform_int_distribution<std::size_t> in_slice(0, slice - 1);
  std::vector<num::SparseEntry> attrs;
  for (std::size_t u = 0; u < opt.n_nodes; ++u) {
    std::set<std::size_t> dims;
    const std::size_t base = static_cast<std::size_t>(g.labels[u]) * slice;
    while (dims.size() < opt.attrs_per_node) dims.insert(from_class(rng) ? base + in_slice(rng) : any_dim(rng));
    for (std::size_t d : dims) attrs.push_back({u, d, 1.0});
  }
  g.attributes = num::SparseMatrix(opt.n_nodes, opt.n_attrs, std::move(attrs));
  g.attr_kind = AttrKind::Categorical;
  g.validate();
  return g;
}

}  // namespace sat::graph
