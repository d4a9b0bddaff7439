#include "sat/cli/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "sat/errors.hpp"

namespace sat::cli {

namespace {

constexpr const char* kHeader = "run,method,dataset,task,seed,lambda_c,metric,value";

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, double>> flatten_metrics(const nlohmann::json& r) {
  std::vector<std::pair<std::string, double>> out;
  if (r.contains("profiling")) {
    for (const char* kind : {"recall", "ndcg"}) {
      std::vector<std::pair<std::size_t, double>> byk;
      for (const auto& [k, v] : r["profiling"][kind].items()) byk.emplace_back(std::stoul(k), v.get<double>());
      std::sort(byk.begin(), byk.end());
      for (const auto& [k, v] : byk) out.emplace_back(std::string(kind) + "@" + std::to_string(k), v);
    }
  }
  if (r.contains("mse")) out.emplace_back("mse", r["mse"].get<double>());
  if (r.contains("classification")) {
    for (const char* key : {"mlp_x", "gcn_a", "gcn_ax"}) {
      if (r["classification"].contains(key)) {
        out.emplace_back(std::string("classification.") + key, r["classification"][key]["mean"].get<double>());
      }
    }
  }
  if (r.contains("link")) {
    out.emplace_back("auc", r["link"]["auc"].get<double>());
    out.emplace_back("ap", r["link"]["ap"].get<double>());
  }
  return out;
}

void append_results(const std::filesystem::path& index, const nlohmann::json& r) {
  const bool fresh = !std::filesystem::exists(index) || std::filesystem::file_size(index) == 0;
  if (index.has_parent_path()) std::filesystem::create_directories(index.parent_path());
  std::ofstream out(index, std::ios::app);
  if (!out) throw DataError("cannot append to " + index.string());
  if (fresh) out << kHeader << '\n';
  for (const auto& [metric, value] : flatten_metrics(r)) {
    out << r["run"].get<std::string>() << ',' << r["method"].get<std::string>() << ','
        << r["dataset"].get<std::string>() << ',' << r["task"].get<std::string>() << ','
        << r["seed"].get<std::uint64_t>() << ',' << fmt(r["lambda_c"].get<double>()) << ',' << metric << ','
        << fmt(value, "%.17g") << '\n';
  }
  if (!out) throw DataError("failed appending to " + index.string());
}

std::vector<ResultRow> read_results(const std::filesystem::path& index) {
  std::ifstream in(index);
  if (!in) throw DataError("cannot open results index " + index.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw DataError(index.string() + ": unexpected header");
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw DataError(index.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
    try {
      rows.push_back({f[0], f[1], f[2], f[3], std::stoull(f[4]), std::stod(f[5]), f[6], std::stod(f[7])});
    } catch (const std::exception&) {
      throw DataError(index.string() + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw DataError("results index has no rows");
  // latest value per (dataset, run, metric)
  std::map<std::tuple<std::string, std::string, std::string>, const ResultRow*> latest;
  for (const auto& r : rows) latest[{r.dataset, r.run, r.metric}] = &r;
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const auto& [key, r] : latest) groups[{r->dataset, r->method, r->metric}].push_back(r->value);
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    std::tie(s.dataset, s.method, s.metric) = key;
    s.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "dataset,method,metric,n,mean,sd,min,max\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.method << ',' << r.metric << ',' << r.n << ',' << fmt(r.mean) << ',' << fmt(r.sd)
        << ',' << fmt(r.min) << ',' << fmt(r.max) << '\n';
  }
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::size_t wd = 7, wm = 6, wk = 6;
  for (const auto& r : rows) {
    wd = std::max(wd, r.dataset.size());
    wm = std::max(wm, r.method.size());
    wk = std::max(wk, r.metric.size());
  }
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %3s  %8s  %8s\n", static_cast<int>(wd), "dataset",
                static_cast<int>(wm), "method", static_cast<int>(wk), "metric", "n", "mean", "sd");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %3zu  %8.4f  %8.4f\n", static_cast<int>(wd), r.dataset.c_str(),
                  static_cast<int>(wm), r.method.c_str(), static_cast<int>(wk), r.metric.c_str(), r.n, r.mean, r.sd);
    out << buf;
  }
  return out.str();
}

}  // namespace sat::cli
