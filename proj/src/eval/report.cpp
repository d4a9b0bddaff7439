#include "sat/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sat/errors.hpp"

namespace sat::eval {

void write_embeddings_csv(const std::filesystem::path& path, std::span<const std::size_t> nodes, const Tensor& rows,
                          const std::string& prefix) {
  if (rows.rows() != nodes.size()) throw ShapeError("write_embeddings_csv: one row per node expected");
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "node";
  for (std::size_t c = 0; c < rows.cols(); ++c) out << ',' << prefix << c;
  out << '\n';
  char buf[32];
  for (std::size_t i : order) {
    out << nodes[i];
    for (double v : rows.row(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::pair<std::vector<std::size_t>, Tensor> read_embeddings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("node", 0) != 0) throw DataError(path.string() + ": missing header");
  const auto dims = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  std::vector<std::size_t> nodes;
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != dims + 1) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(dims + 1) + " fields");
    }
    try {
      nodes.push_back(std::stoull(cells[0]));
      for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(std::stod(cells[c]));
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  const std::size_t rows = nodes.size();
  return {std::move(nodes), Tensor({rows, dims}, std::move(values))};
}

nlohmann::json to_json(const ProfilingResult& r) {
  nlohmann::json recall = nlohmann::json::object(), ndcg = nlohmann::json::object();
  for (const auto& [k, v] : r.recall) recall[std::to_string(k)] = v;
  for (const auto& [k, v] : r.ndcg) ndcg[std::to_string(k)] = v;
  return {{"recall", recall}, {"ndcg", ndcg}, {"evaluated", r.evaluated}, {"skipped_empty_truth", r.skipped}};
}

nlohmann::json to_json(const ClassificationResult& r) {
  return {{"classifier", to_string(r.classifier)},
          {"mode", to_string(r.mode)},
          {"mean", r.mean},
          {"sd", r.sd},
          {"accuracies", r.accuracies}};
}

nlohmann::json to_json(const AucAp& r) { return {{"auc", r.auc}, {"ap", r.ap}}; }

nlohmann::json to_json(const MmdResult& r) {
  return {{"value", r.value}, {"raw", r.raw}, {"bandwidth", r.bandwidth}, {"kernel", "rbf-median"}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace sat::eval
