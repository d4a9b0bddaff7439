#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <unistd.h>

#include "sat/errors.hpp"
#include "sat/graph/io.hpp"
#include "sat/graph/split.hpp"
#include "sat/graph/synthetic.hpp"

using namespace sat::graph;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("satgraph_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
  }

 private:
  fs::path path_;
};

std::string load_error(const TempDir& d, AttrKind kind = AttrKind::Categorical) {
  try {
    load_graph(dataset_paths(d.path()), kind);
  } catch (const sat::DataError& e) {
    return e.what();
  }
  return "";
}

// dense oracle for the renormalized adjacency
std::vector<std::vector<double>> dense_normalized(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  for (const Edge& e : edges) a[e.u][e.v] = a[e.v][e.u] = 1.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(deg[i] * deg[j]);
  return a;
}

AttributedGraph ring(std::size_t n) {
  AttributedGraph g;
  g.n_nodes = n;
  for (std::size_t i = 0; i < n; ++i) g.edges.push_back(make_edge(i, (i + 1) % n));
  g.edges = canonical_edges(g.edges, n);
  g.attributes = sat::num::SparseMatrix(n, 1, {});
  return g;
}

}  // namespace

TEST(LoadGraph, DeduplicatesUndirectedEdges) {
  TempDir d;
  d.write("attrs.tsv", "3\t2\n0\t1\t1\n2\t0\t1\n");
  d.write("edges.tsv", "0\t1\n1\t2\n1\t0\n");
  AttributedGraph g = load_graph(dataset_paths(d.path()), AttrKind::Categorical);
  EXPECT_EQ(g.n_nodes, 3u);
  EXPECT_EQ(g.n_attrs(), 2u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges[1], (Edge{1, 2}));
  EXPECT_DOUBLE_EQ(g.attributes.at(0, 1), 1.0);
  EXPECT_FALSE(g.has_labels());
}

TEST(LoadGraph, ReadsLabels) {
  TempDir d;
  d.write("attrs.tsv", "3\t1\n");
  d.write("edges.tsv", "0\t1\n");
  d.write("labels.tsv", "0\t2\n1\t0\n2\t1\n");
  AttributedGraph g = load_graph(dataset_paths(d.path()), AttrKind::Categorical);
  EXPECT_EQ(g.class_count, 3u);
  EXPECT_EQ(g.labels, (std::vector<int>{2, 0, 1}));
}

TEST(LoadGraph, ReportsLineNumbers) {
  TempDir d;
  d.write("attrs.tsv", "3\t2\n0\t1\t1\n");
  d.write("edges.tsv", "0\t1\n1\tx\n");
  EXPECT_NE(load_error(d).find("edges.tsv:2:"), std::string::npos) << load_error(d);
}

TEST(LoadGraph, RejectsOutOfRangeEndpoint) {
  TempDir d;
  d.write("attrs.tsv", "3\t2\n");
  d.write("edges.tsv", "0\t1\n\n1\t3\n");
  EXPECT_NE(load_error(d).find("edges.tsv:3:"), std::string::npos) << load_error(d);
}

TEST(LoadGraph, RejectsDuplicateTriplet) {
  TempDir d;
  d.write("attrs.tsv", "3\t2\n0\t1\t1\n0\t1\t1\n");
  d.write("edges.tsv", "0\t1\n");
  EXPECT_NE(load_error(d).find("attrs.tsv:3: duplicate"), std::string::npos) << load_error(d);
}

TEST(LoadGraph, RejectsNonBinaryCategoricalValue) {
  TempDir d;
  d.write("attrs.tsv", "3\t2\n0\t1\t0.5\n");
  d.write("edges.tsv", "0\t1\n");
  EXPECT_NE(load_error(d).find("attrs.tsv:2:"), std::string::npos);
  EXPECT_EQ(load_error(d, AttrKind::Real), "");
}

TEST(LoadGraph, RejectsMissingHeaderAndSelfLoop) {
  TempDir d;
  d.write("attrs.tsv", "");
  d.write("edges.tsv", "0\t1\n");
  EXPECT_NE(load_error(d).find("header"), std::string::npos);
  d.write("attrs.tsv", "2\t1\n");
  d.write("edges.tsv", "1\t1\n");
  EXPECT_NE(load_error(d).find("edges.tsv:1: self-loop"), std::string::npos);
}

TEST(LoadGraph, SaveLoadRoundTripIsExact) {
  TempDir d;
  CitationLikeOptions opt;
  opt.n_nodes = 60;
  AttributedGraph g = make_citation_like(opt, 3);
  save_graph(g, d.path());
  AttributedGraph back = load_graph(dataset_paths(d.path()), AttrKind::Categorical);
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.attributes, g.attributes);
  EXPECT_EQ(back.labels, g.labels);
  AttributedGraph again = load_graph(dataset_paths(d.path()), AttrKind::Categorical);
  EXPECT_EQ(again.attributes, back.attributes);
  EXPECT_EQ(again.edges, back.edges);
}

TEST(NodeSplit, RoundingContract) {
  NodeSplit s = make_node_split(10, {0.4, 0.1, 0.5}, 7);
  EXPECT_EQ(s.observed.size(), 4u);
  EXPECT_EQ(s.validation.size(), 1u);
  EXPECT_EQ(s.missing.size(), 5u);
  NodeSplit c = make_node_split(2708, {0.4, 0.1, 0.5}, 1);
  EXPECT_EQ(c.observed.size(), 1083u);
  EXPECT_EQ(c.validation.size(), 271u);
  EXPECT_EQ(c.missing.size(), 1354u);
}

TEST(NodeSplit, DeterministicPerSeedAndSeedSensitive) {
  EXPECT_EQ(make_node_split(2708, {0.4, 0.1, 0.5}, 5), make_node_split(2708, {0.4, 0.1, 0.5}, 5));
  NodeSplit a = make_node_split(2708, {0.4, 0.1, 0.5}, 5);
  NodeSplit b = make_node_split(2708, {0.4, 0.1, 0.5}, 6);
  EXPECT_NE(a.observed, b.observed);
}

TEST(NodeSplit, IsExactPartitionWithinOneNodeOfTargets) {
  for (std::size_t n : {1u, 7u, 10u, 33u, 101u, 2708u, 3327u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      NodeSplit s = make_node_split(n, {0.4, 0.1, 0.5}, seed);
      EXPECT_NO_THROW(check_partition(s, n));
      EXPECT_LE(std::abs(static_cast<double>(s.observed.size()) - 0.4 * n), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(s.validation.size()) - 0.1 * n), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(s.missing.size()) - 0.5 * n), 1.0);
      EXPECT_TRUE(std::is_sorted(s.observed.begin(), s.observed.end()));
    }
  }
}

TEST(NodeSplit, RatiosMustSumToOne) {
  EXPECT_THROW(make_node_split(10, {0.5, 0.1, 0.5}, 0), sat::ConfigError);
  EXPECT_THROW(make_node_split(10, {-0.1, 0.6, 0.5}, 0), sat::ConfigError);
}

TEST(NodeSplit, CheckPartitionDetectsOverlap) {
  NodeSplit s{{0, 1}, {1}, {2}, 0};
  EXPECT_THROW(check_partition(s, 3), sat::DataError);
}

TEST(LinkSplit, PoolExhaustionOnNearlyCompleteGraph) {
  AttributedGraph g;
  g.n_nodes = 4;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};  // K4 minus (2,3)
  g.attributes = sat::num::SparseMatrix(4, 1, {});
  EXPECT_THROW(make_link_split(g, {0.6, 0.2, 0.2}, 0), sat::DataError);
}

TEST(LinkSplit, TooFewEdges) {
  AttributedGraph g = ring(4);
  EXPECT_THROW(make_link_split(g, {0.6, 0.2, 0.2}, 0), sat::DataError);
}

TEST(LinkSplit, CoraSizedCountsAndNegativesAreNonEdges) {
  AttributedGraph g;
  g.n_nodes = 2708;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> node(0, g.n_nodes - 1);
  std::set<Edge> es;
  while (es.size() < 5278) {
    std::size_t a = node(rng), b = node(rng);
    if (a != b) es.insert(make_edge(a, b));
  }
  g.edges.assign(es.begin(), es.end());
  g.attributes = sat::num::SparseMatrix(g.n_nodes, 1, {});
  LinkSplit s = make_link_split(g, {0.6, 0.2, 0.2}, 11);
  EXPECT_EQ(s.train_pos.size(), 3166u);
  EXPECT_EQ(s.val_pos.size(), 1055u);
  EXPECT_EQ(s.test_pos.size(), 1057u);
  EXPECT_EQ(s.val_neg.size(), s.val_pos.size());
  EXPECT_EQ(s.test_neg.size(), s.test_pos.size());

  std::set<Edge> pos;
  for (const auto* part : {&s.train_pos, &s.val_pos, &s.test_pos})
    for (const Edge& e : *part) EXPECT_TRUE(pos.insert(e).second);
  EXPECT_EQ(pos, es);
  std::set<Edge> neg;
  for (const auto* part : {&s.val_neg, &s.test_neg})
    for (const Edge& e : *part) {
      EXPECT_LT(e.u, e.v);
      EXPECT_EQ(es.count(e), 0u);
      EXPECT_TRUE(neg.insert(e).second);
    }
  EXPECT_EQ(make_link_split(g, {0.6, 0.2, 0.2}, 11), s);
}

TEST(Normalize, IsolatedNodeAndSingleEdge) {
  EXPECT_EQ(normalize_adjacency({}, 1).to_dense(), sat::num::Tensor::from_rows({{1.0}}));
  sat::num::Tensor two = normalize_adjacency({{0, 1}}, 2).to_dense();
  for (double v : two.values()) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Normalize, MatchesDenseOracleAndIsSymmetric) {
  std::vector<Edge> p3{{0, 1}, {1, 2}};
  auto oracle = dense_normalized(3, p3);
  auto got = normalize_adjacency(p3, 3).to_dense();
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0, orow = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      row += got(i, j);
      orow += oracle[i][j];
    }
    EXPECT_NEAR(row, orow, 1e-12);
  }
  AttributedGraph g = make_sbm({15, 15}, 0.5, 0.05, 2);
  auto a = normalize_adjacency(g.edges, g.n_nodes);
  auto o = dense_normalized(g.n_nodes, g.edges);
  for (std::size_t i = 0; i < g.n_nodes; ++i) {
    EXPECT_GT(a.at(i, i), 0.0);
    for (std::size_t j = 0; j < g.n_nodes; ++j) {
      EXPECT_NEAR(a.at(i, j), a.at(j, i), 1e-15);
      EXPECT_NEAR(a.at(i, j), o[i][j], 1e-12);
    }
  }
}

TEST(ObservedView, OrderingAndRoundTrip) {
  CitationLikeOptions opt;
  opt.n_nodes = 40;
  AttributedGraph g = make_citation_like(opt, 1);
  AttributeView all = observed_attribute_view(g, [&] {
    std::vector<std::size_t> v(g.n_nodes);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
  }());
  EXPECT_EQ(all.dense, g.attributes.to_dense());
  AttributeView two = observed_attribute_view(g, {2, 0});
  EXPECT_EQ(two.nodes, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(two.row_of[2], 1);
  EXPECT_EQ(two.row_of[1], -1);
  for (std::size_t r = 0; r < two.nodes.size(); ++r) {
    std::vector<std::size_t> one{two.nodes[r]};
    sat::num::Tensor expect = g.attributes.dense_rows(one);
    for (std::size_t c = 0; c < g.n_attrs(); ++c) EXPECT_EQ(two.dense(r, c), expect(0, c));
  }
}

TEST(PosWeight, Examples) {
  EXPECT_DOUBLE_EQ(bce_pos_weight(15, 5), 2.0);
  EXPECT_DOUBLE_EQ(bce_pos_weight(6, 6), 0.0);
  EXPECT_THROW(bce_pos_weight(6, 0), sat::DataError);
  sat::num::SparseMatrix t(3, 5, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {2, 3, 1}, {0, 4, 1}});
  EXPECT_DOUBLE_EQ(bce_pos_weight(t), 2.0);
}

TEST(SplitFile, JsonRoundTripIsByteStable) {
  TempDir d;
  CitationLikeOptions opt;
  opt.n_nodes = 50;
  AttributedGraph g = make_citation_like(opt, 9);
  SplitFile s{make_node_split(g.n_nodes, {0.4, 0.1, 0.5}, 3), make_link_split(g, {0.6, 0.2, 0.2}, 3)};
  save_split(s, d.path() / "a.json");
  SplitFile back = load_split(d.path() / "a.json");
  EXPECT_EQ(*back.node, *s.node);
  EXPECT_EQ(*back.link, *s.link);
  save_split(back, d.path() / "b.json");
  std::ifstream a(d.path() / "a.json"), b(d.path() / "b.json");
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
}

TEST(Synthetic, SbmHasPlantedStructure) {
  AttributedGraph g = make_sbm({15, 15}, 0.5, 0.02, 1);
  EXPECT_EQ(g.n_nodes, 30u);
  EXPECT_EQ(g.n_attrs(), 2u);
  std::size_t within = 0;
  for (const Edge& e : g.edges) within += g.labels[e.u] == g.labels[e.v];
  EXPECT_GT(static_cast<double>(within) / g.edges.size(), 0.8);
  for (std::size_t i = 0; i < g.n_nodes; ++i) EXPECT_EQ(g.attributes.at(i, g.labels[i]), 1.0);
}
