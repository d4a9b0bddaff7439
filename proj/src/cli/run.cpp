#include "sat/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sat/errors.hpp"
#include "sat/eval/report.hpp"
#include "sat/graph/io.hpp"
#include "sat/model/checkpoint.hpp"
#include "sat/model/inference.hpp"

namespace sat::cli {

using num::Tensor;

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json mmd_json(const model::EpochRecord& r) {
  return {{"train", number_or_null(r.mmd_train)}, {"val", number_or_null(r.mmd_val)}, {"prior", number_or_null(r.mmd_prior)}};
}

Tensor rows_of(const Tensor& t, std::span<const std::size_t> rows) {
  Tensor out = Tensor::matrix(rows.size(), t.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= t.rows()) throw std::out_of_range("row index outside the latent table");
    std::copy(t.row(rows[i]).begin(), t.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

void write_vae_curves(const std::vector<baselines::VaeEpoch>& curves, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "epoch,recon,kl,total,val_score\n";
  char buf[160];
  for (const auto& c : curves) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g\n", c.epoch, c.recon, c.kl, c.total, c.val_score);
    out << buf;
  }
}

}  // namespace

nlohmann::json to_json(const RunSpec& s) {
  return {{"dataset", {{"name", s.dataset.name}, {"dir", s.dataset.dir.string()},
                       {"attr_kind", graph::to_string(s.dataset.attr_kind)}}},
          {"method", to_string(s.method)},
          {"split_seed", s.split_seed},
          {"train", model::to_json(s.train)},
          {"vae", baselines::to_json(s.vae)}};
}

RunSpec run_spec_from_json(const nlohmann::json& j) {
  RunSpec s;
  try {
    const auto& d = j.at("dataset");
    s.dataset.name = d.at("name").get<std::string>();
    s.dataset.dir = d.at("dir").get<std::string>();
    s.dataset.attr_kind = graph::parse_attr_kind(d.at("attr_kind").get<std::string>());
    s.method = parse_method(j.at("method").get<std::string>());
    s.split_seed = j.at("split_seed").get<std::uint64_t>();
    s.train = model::train_config_from_json(j.at("train"));
    s.vae = baselines::vae_config_from_json(j.at("vae"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return s;
}

RunSpec resolve_run_spec(const DatasetSpec& dataset, Method method, model::TrainConfig base, std::uint64_t seed,
                         std::optional<double> lambda_c, std::uint64_t split_seed) {
  require_supported(method, base.task);
  RunSpec s;
  s.dataset = dataset;
  s.method = method;
  s.split_seed = split_seed;
  base.seed = seed;
  base.lambda_c = lambda_c.value_or(default_lambda_c(dataset.name, base.task));
  s.train = uses_sat_model(method) ? method_config(method, base) : base;
  s.vae.hidden = base.hidden;
  s.vae.latent = base.latent;
  s.vae.lr = base.lr;
  s.vae.max_epochs = base.max_epochs;
  s.vae.seed = seed;
  s.train.validate();
  s.vae.validate();
  return s;
}

std::string run_name(const RunSpec& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_lc%g_s%llu", s.train.lambda_c, static_cast<unsigned long long>(s.train.seed));
  return to_string(s.method) + buf;
}

graph::AttributedGraph load_dataset(const DatasetSpec& d) {
  return graph::load_graph(graph::dataset_paths(d.dir), d.attr_kind);
}

graph::SplitFile make_split(const graph::AttributedGraph& g, model::Task task, std::uint64_t seed,
                            std::array<double, 3> node_ratios, std::array<double, 3> link_ratios) {
  graph::SplitFile s;
  s.node = graph::make_node_split(g.n_nodes, node_ratios, seed);
  if (task == model::Task::LinkPrediction) s.link = graph::make_link_split(g, link_ratios, seed);
  return s;
}

TrainedRun train_run(const RunSpec& spec, graph::AttributedGraph g, graph::SplitFile split,
                     const model::EpochCallback& on_epoch) {
  require_supported(spec.method, spec.task());
  spec.train.validate();
  spec.vae.validate();
  if (!split.node) throw DataError("split file has no node split");
  if (spec.task() == model::Task::LinkPrediction && !split.link) throw DataError("split file has no link split");
  const auto start = std::chrono::steady_clock::now();

  TrainedRun run;
  run.spec = spec;
  run.graph = std::move(g);
  run.split = std::move(split);
  run.data = model::make_sat_data(run.graph, *run.split.node,
                                  spec.task() == model::Task::LinkPrediction ? &*run.split.link : nullptr);
  auto& summary = run.summary;
  if (uses_sat_model(spec.method)) {
    run.sat = model::make_model(spec.train, run.data);
    const model::TrainResult r = model::train(*run.sat, run.data, spec.train, on_epoch);
    run.curves = r.curves;
    summary["best_epoch"] = r.best_epoch;
    summary["best_score"] = r.best_score;
    summary["selection"] = model::to_string(r.selection);
    summary["epochs"] = r.curves.size();
    summary["gen_updates"] = r.gen_updates;
    summary["disc_updates"] = r.disc_updates;
    if (spec.train.mmd_every > 0 && spec.train.terms.needs_attribute_latents()) {
      model::EpochRecord selected;
      model::MmdProbe(run.data, spec.train)
          .measure(*run.sat, run.data, model::infer_structure_latents(*run.sat, run.data), selected);
      summary["mmd"] = {{"epoch1", mmd_json(r.curves.front())}, {"selected", mmd_json(selected)}};
    }
  } else if (spec.method == Method::Vae) {
    run.vae = std::make_unique<baselines::Vae>(run.data.n_attrs, spec.vae);
    const baselines::VaeResult r = baselines::train_vae(*run.vae, run.data);
    run.vae_curves = r.curves;
    summary["best_epoch"] = r.best_epoch;
    summary["best_score"] = r.best_score;
    summary["epochs"] = r.curves.size();
  }
  summary["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void save_run(const TrainedRun& run, const fs::path& dir) {
  if (fs::exists(dir)) throw ConfigError("run directory " + dir.string() + " already exists");
  fs::create_directories(dir);
  eval::write_json(dir / "config.json", to_json(run.spec));
  graph::save_split(run.split, dir / "split.json");
  model::Checkpoint ckpt;
  const int best_epoch = run.summary.value("best_epoch", 0);
  const double best_score = run.summary.value("best_score", 0.0);
  if (run.sat) {
    ckpt = model::sat_checkpoint(*run.sat, run.spec.train, best_epoch, best_score);
    model::write_curves_csv(run.curves, dir / "curves.csv");
  } else if (run.vae) {
    ckpt = baselines::vae_checkpoint(*run.vae, best_epoch, best_score);
    write_vae_curves(run.vae_curves, dir / "curves.csv");
  } else {
    ckpt.kind = to_string(run.spec.method);
  }
  model::save_checkpoint(ckpt, dir / "model.ckpt");
  eval::write_json(dir / "summary.json", run.summary);
}

TrainedRun load_run(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("no run directory at " + dir.string());
  TrainedRun run;
  run.spec = run_spec_from_json(eval::read_json(dir / "config.json"));
  run.graph = load_dataset(run.spec.dataset);
  run.split = graph::load_split(dir / "split.json");
  if (!run.split.node) throw DataError(dir.string() + ": split has no node split");
  run.data = model::make_sat_data(run.graph, *run.split.node,
                                  run.spec.task() == model::Task::LinkPrediction && run.split.link ? &*run.split.link
                                                                                                    : nullptr);
  const model::Checkpoint ckpt = model::load_checkpoint(dir / "model.ckpt");
  if (uses_sat_model(run.spec.method)) {
    run.sat = model::sat_model_from_checkpoint(ckpt).model;
  } else if (run.spec.method == Method::Vae) {
    run.vae = baselines::vae_from_checkpoint(ckpt);
  } else if (ckpt.kind != to_string(run.spec.method)) {
    throw DataError(dir.string() + ": checkpoint kind does not match the run's method");
  }
  if (fs::exists(dir / "summary.json")) run.summary = eval::read_json(dir / "summary.json");
  return run;
}

Tensor complete(TrainedRun& run, std::span<const std::size_t> nodes) {
  if (run.sat) return model::complete_attributes(*run.sat, run.data, nodes);
  if (run.vae) return baselines::vae_latent_aggre(*run.vae, run.data, nodes);
  return baselines::neigh_aggre(run.graph, run.data.observed, nodes);
}

Tensor latents(TrainedRun& run, const std::string& which, std::span<const std::size_t> nodes) {
  if (which == "structure") {
    if (!run.sat) throw ConfigError(to_string(run.spec.method) + " has no structure latents");
    return rows_of(model::infer_structure_latents(*run.sat, run.data), nodes);
  }
  if (which != "attribute") throw ConfigError("latent kind must be 'structure' or 'attribute'");
  if (!run.sat && !run.vae) throw ConfigError(to_string(run.spec.method) + " has no attribute latents");
  std::vector<std::size_t> rows;
  for (std::size_t v : nodes) {
    if (v >= run.data.n_nodes || run.data.x_obs.row_of[v] < 0) {
      throw ConfigError("attribute latents exist only for observed nodes; node " + std::to_string(v) + " is not one");
    }
    rows.push_back(static_cast<std::size_t>(run.data.x_obs.row_of[v]));
  }
  const Tensor all = run.sat ? model::infer_attribute_latents(*run.sat, run.data.x_obs.sparse)
                             : run.vae->posterior_means(run.data.x_obs.sparse);
  return rows_of(all, rows);
}

std::vector<double> link_scores(TrainedRun& run, std::span<const graph::Edge> pairs) {
  if (!run.sat || !supports(run.spec.method, model::Task::LinkPrediction)) {
    throw ConfigError(to_string(run.spec.method) + " does not score links");
  }
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (const auto& e : pairs) p.emplace_back(e.u, e.v);
  return model::score_links(*run.sat, run.data, p);
}

nlohmann::json evaluate_run(TrainedRun& run, const EvalSpec& spec) {
  const RunSpec& rs = run.spec;
  nlohmann::json j;
  j["run"] = run_name(rs);
  j["method"] = to_string(rs.method);
  j["dataset"] = rs.dataset.name;
  j["task"] = model::to_string(rs.task());
  j["seed"] = rs.train.seed;
  j["split_seed"] = rs.split_seed;
  j["lambda_c"] = rs.train.lambda_c;
  if (run.summary.contains("best_epoch")) {
    j["selection"] = {{"best_epoch", run.summary["best_epoch"]}, {"score", run.summary["best_score"]}};
  }
  if (run.summary.contains("mmd")) j["latent_matching"] = run.summary["mmd"];

  const std::vector<std::size_t> ks = spec.ks.empty() ? default_ks(rs.dataset.name) : spec.ks;
  if (rs.task() == model::Task::Completion) {
    const auto& missing = run.data.missing;
    const Tensor xhat = complete(run, missing);
    if (spec.profiling) {
      if (rs.dataset.attr_kind == graph::AttrKind::Categorical) {
        std::vector<std::size_t> usable;
        for (std::size_t k : ks) {
          if (k <= run.data.n_attrs) usable.push_back(k);
        }
        j["profiling"] = eval::to_json(eval::profile(xhat, run.graph.attributes.select_rows(missing), usable));
      } else {
        const Tensor truth = run.graph.attributes.select_rows(missing).to_dense();
        j["mse"] = eval::mean_squared_error(xhat, truth);
      }
    }
    if (spec.classification && run.graph.has_labels()) {
      std::vector<std::size_t> labeled;
      for (std::size_t v : missing) {
        if (run.graph.labels[v] >= 0) labeled.push_back(v);
      }
      // observed nodes keep their true attributes; the rest carry the completion
      Tensor features = run.graph.attributes.to_dense();
      std::vector<std::size_t> restored = run.data.validation;
      restored.insert(restored.end(), missing.begin(), missing.end());
      const Tensor rest = complete(run, restored);
      for (std::size_t i = 0; i < restored.size(); ++i) {
        std::copy(rest.row(i).begin(), rest.row(i).end(), features.row(restored[i]).begin());
      }
      const auto a_hat = graph::normalize_adjacency(run.graph.edges, run.graph.n_nodes);
      using eval::Classifier;
      using eval::InputMode;
      nlohmann::json cls;
      cls["mlp_x"] = eval::to_json(
          eval::classify_nodes(&features, run.graph.labels, labeled, Classifier::MLP, InputMode::X, nullptr, spec.classify));
      cls["gcn_a"] = eval::to_json(
          eval::classify_nodes(nullptr, run.graph.labels, labeled, Classifier::GCN, InputMode::A, &a_hat, spec.classify));
      cls["gcn_ax"] = eval::to_json(
          eval::classify_nodes(&features, run.graph.labels, labeled, Classifier::GCN, InputMode::AX, &a_hat, spec.classify));
      cls["folds"] = spec.classify.folds;
      cls["repeats"] = spec.classify.repeats;
      cls["seed"] = spec.classify.seed;
      j["classification"] = cls;
    }
  } else if (spec.link && run.split.link) {
    const auto pos = link_scores(run, run.split.link->test_pos);
    const auto neg = link_scores(run, run.split.link->test_neg);
    j["link"] = eval::to_json(eval::auc_ap(pos, neg));
  }
  return j;
}

}  // namespace sat::cli
