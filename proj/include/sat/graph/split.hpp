#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "sat/graph/graph.hpp"

namespace sat::graph {

struct NodeSplit {
  std::vector<std::size_t> observed;    // attribute-observed training nodes
  std::vector<std::size_t> validation;  // used only for model selection
  std::vector<std::size_t> missing;     // attribute-missing test nodes
  std::uint64_t seed = 0;

  bool operator==(const NodeSplit&) const = default;
};

struct LinkSplit {
  std::vector<Edge> train_pos;
  std::vector<Edge> val_pos;
  std::vector<Edge> test_pos;
  std::vector<Edge> val_neg;
  std::vector<Edge> test_neg;
  std::uint64_t seed = 0;

  bool operator==(const LinkSplit&) const = default;
};

/// Throws ConfigError unless the ratios are non-negative and sum to 1 (within 1e-9).
void validate_ratios(const std::array<double, 3>& ratios);

/// Seeded shuffle of [0, n) cut into observed / validation / missing. Sizes follow
/// largest-remainder rounding of r·n, so each is within one node of its target.
/// Each set is returned sorted.
NodeSplit make_node_split(std::size_t n, std::array<double, 3> ratios = {0.4, 0.1, 0.5},
                          std::uint64_t seed = 0);

/// Seeded shuffle of the edge list into floor(r0·E) / floor(r1·E) / remainder, plus as many
/// uniformly sampled non-edges as positives for validation and test.
/// Throws DataError when there are fewer than 5 edges or the non-edge pool is too small.
LinkSplit make_link_split(const AttributedGraph& g, std::array<double, 3> ratios = {0.6, 0.2, 0.2},
                          std::uint64_t seed = 0);

/// Asserts that the split is an exact partition of [0, n); throws DataError otherwise.
void check_partition(const NodeSplit& s, std::size_t n);

/// Contents of split.json. A link-prediction split also carries the node split.
struct SplitFile {
  std::optional<NodeSplit> node;
  std::optional<LinkSplit> link;
};

void save_split(const SplitFile& s, const std::filesystem::path& path);
SplitFile load_split(const std::filesystem::path& path);

}  // namespace sat::graph
