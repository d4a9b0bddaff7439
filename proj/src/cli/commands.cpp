#include "sat/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sat/cli/results.hpp"
#include "sat/cli/run.hpp"
#include "sat/errors.hpp"
#include "sat/eval/report.hpp"

namespace sat::cli {

namespace {

struct DatasetFlags {
  std::string dir;
  std::string name;
  std::string attr_kind = "categorical";

  void add(CLI::App* app, bool required) {
    auto* d = app->add_option("--data", dir, "directory with edges.tsv, attrs.tsv and optional labels.tsv");
    if (required) d->required();
    app->add_option("--dataset", name, "dataset name used for defaults and reports (default: directory name)");
    app->add_option("--attr-kind", attr_kind, "categorical or real")->check(CLI::IsMember({"categorical", "real"}));
  }

  DatasetSpec spec() const {
    DatasetSpec d;
    d.dir = fs::absolute(dir).lexically_normal();
    d.name = name.empty() ? d.dir.filename().string() : name;
    if (d.name.empty()) d.name = d.dir.parent_path().filename().string();
    d.attr_kind = graph::parse_attr_kind(attr_kind);
    return d;
  }
};

std::array<double, 3> to_ratios(const std::vector<double>& v, const char* flag) {
  if (v.size() != 3) throw ConfigError(std::string(flag) + " takes three comma-separated values");
  const std::array<double, 3> r{v[0], v[1], v[2]};
  graph::validate_ratios(r);
  return r;
}

std::vector<std::size_t> node_set(const TrainedRun& run, const std::string& which) {
  if (which == "missing") return run.data.missing;
  if (which == "validation") return run.data.validation;
  if (which == "observed") return run.data.observed;
  if (which == "all") {
    std::vector<std::size_t> v(run.data.n_nodes);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }
  throw ConfigError("unknown node set '" + which + "'");
}

std::vector<graph::Edge> read_pairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<graph::Edge> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long u = -1, v = -1;
    if (!(ss >> u >> v) || u < 0 || v < 0) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected two node ids");
    }
    pairs.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  return pairs;
}

void check_out_of_run(const fs::path& run, const fs::path& out) {
  const auto r = fs::weakly_canonical(run);
  const auto o = fs::weakly_canonical(out).parent_path();
  if (o == r) throw ConfigError("outputs may not be written inside the run directory " + run.string());
}

// ---- split ----

struct SplitCmd {
  DatasetFlags data;
  std::string task = "completion";
  std::vector<double> ratios{0.4, 0.1, 0.5};
  std::vector<double> link_ratios{0.6, 0.2, 0.2};
  std::uint64_t seed = 0;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("split", "write a seeded node (and link) split");
    data.add(c, true);
    c->add_option("--task", task, "completion or link");
    c->add_option("--ratios", ratios, "observed,validation,missing node fractions")->delimiter(',');
    c->add_option("--link-ratios", link_ratios, "train,validation,test edge fractions")->delimiter(',');
    c->add_option("--seed", seed);
    c->add_option("--out", out, "split.json path")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    const auto t = model::parse_task(task);
    const auto nr = to_ratios(ratios, "--ratios");
    const auto lr = to_ratios(link_ratios, "--link-ratios");
    const auto g = load_dataset(data.spec());
    const auto s = make_split(g, t, seed, nr, lr);
    graph::save_split(s, out);
    std::printf("split: %zu observed, %zu validation, %zu missing", s.node->observed.size(),
                s.node->validation.size(), s.node->missing.size());
    if (s.link) {
      std::printf("; %zu/%zu/%zu edges", s.link->train_pos.size(), s.link->val_pos.size(), s.link->test_pos.size());
    }
    std::printf(" -> %s\n", out.c_str());
  }
};

// ---- train ----

struct TrainCmd {
  DatasetFlags data;
  std::string config;
  std::string method = "sat-gcn";
  std::string task = "completion";
  std::string split;
  std::vector<std::uint64_t> seeds;
  std::vector<double> lambdas;
  std::uint64_t split_seed = 0;
  std::string out;
  int log_every = 0;
  model::TrainConfig flags;
  std::string selection;
  CLI::App* app = nullptr;

  void add(CLI::App& root) {
    app = root.add_subcommand("train", "train one run per (λ_c, seed) pair");
    data.add(app, false);
    app->add_option("--config", config, "training config JSON or the config.json of an earlier run");
    app->add_option("--method", method,
                    "sat-gcn, sat-gat, sat-no-self, sat-no-cross, sat-no-adver, neighaggre, vae, gnn-gcn, gnn-gat");
    app->add_option("--task", task, "completion or link");
    app->add_option("--split", split, "split.json to pin the split; otherwise one is drawn per run");
    app->add_option("--split-seed", split_seed, "seed of the drawn split (default: the run seed)");
    app->add_option("--seed", seeds, "comma-separated seeds")->delimiter(',');
    app->add_option("--lambda-c", lambdas, "comma-separated cross-stream weights")->delimiter(',');
    app->add_option("--epochs", flags.max_epochs);
    app->add_option("--lr", flags.lr);
    app->add_option("--dropout", flags.dropout);
    app->add_option("--hidden", flags.hidden);
    app->add_option("--latent", flags.latent);
    app->add_option("--edge-dim", flags.edge_dim);
    app->add_option("--gen-steps", flags.gen_steps);
    app->add_option("--disc-steps", flags.disc_steps);
    app->add_option("--selection", selection, "auto, recall@10, mse or auc");
    app->add_flag("--saturating", flags.saturating_generator, "use the saturating generator loss");
    app->add_flag("--cross-a-observed-only", "reconstruct only the observed block in the cross structure term");
    app->add_option("--mmd-every", flags.mmd_every, "epochs between MMD diagnostics, 0 disables them");
    app->add_option("--log-every", log_every, "print losses every N epochs to stderr");
    app->add_option("--out", out, "parent directory of the run directories")->required();
    app->callback([this] { run(); });
  }

  bool given(const char* name) const { return app->count(name) > 0; }

  void run() const {
    nlohmann::json stored;
    model::TrainConfig base;
    std::optional<RunSpec> prior;
    if (!config.empty()) {
      stored = eval::read_json(config);
      if (stored.contains("method") && stored.contains("train")) {
        prior = run_spec_from_json(stored);
        base = prior->train;
      } else {
        base = model::train_config_from_json(stored);
      }
    }
    if (given("--epochs")) base.max_epochs = flags.max_epochs;
    if (given("--lr")) base.lr = flags.lr;
    if (given("--dropout")) base.dropout = flags.dropout;
    if (given("--hidden")) base.hidden = flags.hidden;
    if (given("--latent")) base.latent = flags.latent;
    if (given("--edge-dim")) base.edge_dim = flags.edge_dim;
    if (given("--gen-steps")) base.gen_steps = flags.gen_steps;
    if (given("--disc-steps")) base.disc_steps = flags.disc_steps;
    if (given("--selection")) base.selection = model::parse_selection(selection);
    if (given("--saturating")) base.saturating_generator = true;
    if (given("--cross-a-observed-only")) base.cross_a_all_nodes = false;
    if (given("--mmd-every")) base.mmd_every = flags.mmd_every;
    if (given("--task") || !prior) base.task = model::parse_task(task);

    DatasetSpec dataset;
    if (!data.dir.empty()) {
      dataset = data.spec();
    } else if (prior) {
      dataset = prior->dataset;
      if (!data.name.empty()) dataset.name = data.name;
    } else {
      throw ConfigError("--data is required");
    }
    const Method m = given("--method") || !prior ? parse_method(method) : prior->method;
    std::vector<std::uint64_t> seed_list = seeds;
    if (seed_list.empty()) seed_list.push_back(prior ? prior->train.seed : base.seed);
    std::vector<std::optional<double>> lambda_list(lambdas.begin(), lambdas.end());
    if (lambda_list.empty()) lambda_list.push_back(prior ? std::optional<double>(prior->train.lambda_c) : std::nullopt);

    std::optional<graph::SplitFile> pinned;
    if (!split.empty()) pinned = graph::load_split(split);

    // resolve and check every run before any training
    std::vector<std::pair<RunSpec, fs::path>> plan;
    for (const auto& lc : lambda_list) {
      for (std::uint64_t seed : seed_list) {
        std::uint64_t ss = seed;
        if (pinned) ss = pinned->node ? pinned->node->seed : 0;
        else if (given("--split-seed")) ss = split_seed;
        else if (prior && seeds.empty()) ss = prior->split_seed;
        RunSpec spec = resolve_run_spec(dataset, m, base, seed, lc, ss);
        const fs::path dir = fs::path(out) / run_name(spec);
        if (fs::exists(dir)) throw ConfigError("run directory " + dir.string() + " already exists");
        for (const auto& [other, d] : plan) {
          if (d == dir) throw ConfigError("duplicate run " + dir.string());
        }
        plan.emplace_back(std::move(spec), dir);
      }
    }

    const auto g = load_dataset(dataset);
    for (const auto& [spec, dir] : plan) {
      graph::SplitFile s = pinned ? *pinned : make_split(g, spec.task(), spec.split_seed);
      model::EpochCallback log;
      if (log_every > 0) {
        log = [this](const model::EpochRecord& r) {
          if (r.epoch % log_every == 0) {
            std::fprintf(stderr, "epoch %4d  total %.6g  disc %.6g  val %.6g\n", r.epoch, r.loss.total,
                         r.loss.disc_adv, r.val_score);
          }
        };
      }
      const TrainedRun run = train_run(spec, g, std::move(s), log);
      save_run(run, dir);
      std::printf("%s  best_epoch %d  score %.6g  %.1fs\n", dir.string().c_str(), run.summary.value("best_epoch", 0),
                  run.summary.value("best_score", 0.0), run.summary.value("seconds", 0.0));
    }
  }
};

// ---- complete ----

struct CompleteCmd {
  std::string run_dir;
  std::string nodes = "missing";
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("complete", "write completed attributes of a node set");
    c->add_option("--run", run_dir)->required();
    c->add_option("--nodes", nodes, "missing, validation, observed or all");
    c->add_option("--out", out, "CSV path")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    check_out_of_run(run_dir, out);
    TrainedRun r = load_run(run_dir);
    const auto set = node_set(r, nodes);
    eval::write_embeddings_csv(out, set, complete(r, set), "x");
    std::printf("%zu rows -> %s\n", set.size(), out.c_str());
  }
};

// ---- linkpred ----

struct LinkCmd {
  std::string run_dir;
  std::string pairs;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("linkpred", "score node pairs (default: the held-out test pairs)");
    c->add_option("--run", run_dir)->required();
    c->add_option("--pairs", pairs, "whitespace-separated node pairs, one per line");
    c->add_option("--out", out, "CSV path")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    check_out_of_run(run_dir, out);
    TrainedRun r = load_run(run_dir);
    std::vector<graph::Edge> p;
    std::vector<int> label;
    if (!pairs.empty()) {
      p = read_pairs(pairs);
    } else {
      if (!r.split.link) throw DataError("run has no link split; pass --pairs");
      for (const auto& e : r.split.link->test_pos) p.push_back(e), label.push_back(1);
      for (const auto& e : r.split.link->test_neg) p.push_back(e), label.push_back(0);
    }
    for (const auto& e : p) {
      if (e.u >= r.data.n_nodes || e.v >= r.data.n_nodes) throw DataError("pair endpoint outside the graph");
    }
    const auto scores = link_scores(r, p);
    std::ofstream f(out);
    if (!f) throw DataError("cannot write " + out);
    f << (label.empty() ? "u,v,score\n" : "u,v,score,label\n");
    char buf[32];
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", scores[i]);
      f << p[i].u << ',' << p[i].v << ',' << buf;
      if (!label.empty()) f << ',' << label[i];
      f << '\n';
    }
    std::printf("%zu pairs -> %s\n", p.size(), out.c_str());
  }
};

// ---- evaluate ----

struct EvaluateCmd {
  std::string run_dir;
  std::string index;
  std::vector<std::size_t> ks;
  bool no_profiling = false;
  bool no_classification = false;
  bool no_link = false;
  eval::ClassifyOptions classify;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("evaluate", "write metrics.json and append to the results index");
    c->add_option("--run", run_dir)->required();
    c->add_option("--index", index, "results index CSV (default: results.csv next to the run)");
    c->add_option("--ks", ks, "profiling cut-offs")->delimiter(',');
    c->add_flag("--no-profiling", no_profiling);
    c->add_flag("--no-classification", no_classification);
    c->add_flag("--no-link", no_link);
    c->add_option("--folds", classify.folds);
    c->add_option("--repeats", classify.repeats);
    c->add_option("--classify-epochs", classify.max_epochs);
    c->add_option("--classify-seed", classify.seed);
    c->callback([this] { run(); });
  }

  void run() const {
    TrainedRun r = load_run(run_dir);
    EvalSpec spec;
    spec.profiling = !no_profiling;
    spec.classification = !no_classification;
    spec.link = !no_link;
    spec.ks = ks;
    spec.classify = classify;
    const auto report = evaluate_run(r, spec);
    eval::write_json(fs::path(run_dir) / "metrics.json", report);
    const fs::path idx = index.empty() ? fs::absolute(run_dir).lexically_normal().parent_path() / "results.csv"
                                       : fs::path(index);
    append_results(idx, report);
    for (const auto& [metric, value] : flatten_metrics(report)) std::printf("%-28s %.6f\n", metric.c_str(), value);
  }
};

// ---- report ----

struct ReportCmd {
  std::string index;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("report", "mean and sd over runs per dataset, method and metric");
    c->add_option("--index", index, "results index CSV")->required();
    c->add_option("--out", out, "summary CSV path");
    c->callback([this] { run(); });
  }

  void run() const {
    const auto rows = summarize(read_results(index));
    if (!out.empty()) write_summary_csv(rows, out);
    std::fputs(format_summary(rows).c_str(), stdout);
  }
};

// ---- export-embeddings ----

struct ExportCmd {
  std::string run_dir;
  std::string which = "structure";
  std::string nodes;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("export-embeddings", "write latent codes of a node set");
    c->add_option("--run", run_dir)->required();
    c->add_option("--which", which, "structure or attribute")->check(CLI::IsMember({"structure", "attribute"}));
    c->add_option("--nodes", nodes, "missing, validation, observed or all (default: all for structure, observed for attribute)");
    c->add_option("--out", out, "CSV path")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    check_out_of_run(run_dir, out);
    TrainedRun r = load_run(run_dir);
    const auto set = node_set(r, nodes.empty() ? (which == "structure" ? "all" : "observed") : nodes);
    eval::write_embeddings_csv(out, set, latents(r, which, set));
    std::printf("%zu rows -> %s\n", set.size(), out.c_str());
  }
};

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Attribute completion and link prediction on attribute-missing graphs", "satgraph"};
  app.require_subcommand(1);
  SplitCmd split;
  TrainCmd train;
  CompleteCmd complete_cmd;
  LinkCmd link;
  EvaluateCmd evaluate;
  ReportCmd report;
  ExportCmd export_cmd;
  split.add(app);
  train.add(app);
  complete_cmd.add(app);
  link.add(app);
  evaluate.add(app);
  report.add(app);
  export_cmd.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "diverged at epoch %ld: %s\n", e.epoch(), e.what());
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace sat::cli
