#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sat::cli {

/// One row of the append-only results index.
struct ResultRow {
  std::string run;
  std::string method;
  std::string dataset;
  std::string task;
  std::uint64_t seed = 0;
  double lambda_c = 0.0;
  std::string metric;
  double value = 0.0;
};

/// Scalar metrics of a metric report, e.g. ("recall@10", 0.15), ("classification.mlp_x", 0.76).
std::vector<std::pair<std::string, double>> flatten_metrics(const nlohmann::json& report);

/// Appends one row per scalar metric, writing the header when the file is new.
void append_results(const std::filesystem::path& index, const nlohmann::json& report);
std::vector<ResultRow> read_results(const std::filesystem::path& index);

struct SummaryRow {
  std::string dataset;
  std::string method;
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single run
  double min = 0.0;
  double max = 0.0;
};

/// Mean ± sd over runs per dataset × method × metric, sorted by dataset, method, metric.
/// A run evaluated more than once contributes its latest row. Throws DataError when empty.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
/// Fixed-width text table.
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace sat::cli
