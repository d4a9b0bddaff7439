#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sat/eval/classify.hpp"
#include "sat/eval/metrics.hpp"

namespace sat::eval {

/// CSV with header "node,<prefix>0,...", one row per node in ascending id order, values printed
/// with 17 significant digits so they parse back exactly. rows(i) belongs to nodes[i].
void write_embeddings_csv(const std::filesystem::path& path, std::span<const std::size_t> nodes, const Tensor& rows,
                          const std::string& prefix = "z");

/// Node ids and values of an embeddings CSV. Throws DataError on malformed input.
std::pair<std::vector<std::size_t>, Tensor> read_embeddings_csv(const std::filesystem::path& path);

nlohmann::json to_json(const ProfilingResult& r);
nlohmann::json to_json(const ClassificationResult& r);
nlohmann::json to_json(const AucAp& r);
nlohmann::json to_json(const MmdResult& r);

/// Pretty JSON with a trailing newline; the same document always yields the same bytes.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace sat::eval
