#include "sat/eval/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sat/errors.hpp"
#include "sat/numerics/adam.hpp"
#include "sat/numerics/init.hpp"
#include "sat/numerics/ops.hpp"

namespace sat::eval {

using namespace num;

std::string to_string(Classifier c) { return c == Classifier::MLP ? "mlp" : "gcn"; }

std::string to_string(InputMode m) {
  switch (m) {
    case InputMode::X: return "X";
    case InputMode::A: return "A";
    case InputMode::AX: return "A+X";
  }
  throw std::logic_error("unknown input mode");
}

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> nodes, std::span<const int> labels,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("need at least two folds");
  std::map<int, std::vector<std::size_t>> by_class;  // label -> positions in `nodes`
  for (std::size_t i = 0; i < nodes.size(); ++i) by_class[labels[nodes[i]]].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> fold(nodes.size());
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    // continuing the round-robin across classes keeps the folds balanced overall
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = (offset + j) % folds;
    offset += members.size();
  }
  return fold;
}

namespace {

struct Net {
  Classifier classifier;
  InputMode mode;
  const Tensor* features;
  const SparseMatrix* a_hat;
  double rate;
  ParameterSet params;
  Parameter* w1;
  Parameter* b1;
  Parameter* w2;
  Parameter* b2;

  Net(Classifier c, InputMode m, const Tensor* x, const SparseMatrix* a, std::size_t in, std::size_t hidden,
      std::size_t classes, double drop, Rng& rng)
      : classifier(c), mode(m), features(x), a_hat(a), rate(drop) {
    w1 = &params.add("w1", glorot_uniform(in, hidden, rng));
    b1 = &params.add("b1", Tensor::matrix(1, hidden));
    w2 = &params.add("w2", glorot_uniform(hidden, classes, rng));
    b2 = &params.add("b2", Tensor::matrix(1, classes));
  }

  // Logits for every input row: the listed nodes (MLP) or all nodes (GCN).
  Var forward(Tape& tape, bool training, Rng& rng) {
    Var w = tape.parameter(*w1);
    Var h;
    if (mode == InputMode::A) {
      h = spmm(*a_hat, w);
    } else {
      Var x = dropout(tape.constant(*features), rate, training, rng);
      h = matmul(x, w);
      if (classifier == Classifier::GCN) h = spmm(*a_hat, h);
    }
    h = dropout(relu(add_bias(h, tape.parameter(*b1))), rate, training, rng);
    Var out = matmul(h, tape.parameter(*w2));
    if (classifier == Classifier::GCN) out = spmm(*a_hat, out);
    return add_bias(out, tape.parameter(*b2));
  }
};

std::size_t argmax_row(const Tensor& t, std::size_t r) {
  const auto row = t.row(r);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

}  // namespace

ClassificationResult classify_nodes(const Tensor* features, std::span<const int> labels,
                                    std::span<const std::size_t> nodes, Classifier classifier, InputMode mode,
                                    const SparseMatrix* a_hat, const ClassifyOptions& opt) {
  if (nodes.size() < opt.folds) throw DataError("fewer labeled nodes than folds");
  if (classifier == Classifier::MLP && mode != InputMode::X) throw ConfigError("an MLP classifier reads features only");
  if (classifier == Classifier::GCN && !a_hat) throw ConfigError("a GCN classifier needs the adjacency");
  if (mode != InputMode::A && !features) throw ConfigError("input mode " + to_string(mode) + " needs features");
  if (!(opt.holdout > 0.0 && opt.holdout < 1.0)) throw ConfigError("holdout share must lie in (0, 1)");
  int max_label = -1;
  for (std::size_t v : nodes) {
    if (v >= labels.size() || labels[v] < 0) throw DataError("node " + std::to_string(v) + " has no label");
    max_label = std::max(max_label, labels[v]);
  }
  const std::size_t classes = static_cast<std::size_t>(max_label) + 1;

  // The MLP sees only the evaluated rows; graph models see every node.
  std::vector<int> row_labels;
  std::vector<std::size_t> row_of_node(nodes.size());
  Tensor mlp_x;
  const Tensor* input = features;
  std::size_t in_dim = 0;
  if (classifier == Classifier::MLP) {
    mlp_x = Tensor::matrix(nodes.size(), features->cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] >= features->rows()) throw DataError("feature matrix has no row for node " + std::to_string(nodes[i]));
      std::copy(features->row(nodes[i]).begin(), features->row(nodes[i]).end(), mlp_x.row(i).begin());
      row_labels.push_back(labels[nodes[i]]);
      row_of_node[i] = i;
    }
    input = &mlp_x;
    in_dim = features->cols();
  } else {
    const std::size_t n = a_hat->rows();
    if (mode == InputMode::AX && features->rows() != n) throw ConfigError("features do not cover every graph node");
    row_labels.assign(n, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] >= n) throw DataError("node outside the graph");
      row_labels[nodes[i]] = labels[nodes[i]];
      row_of_node[i] = nodes[i];
    }
    in_dim = mode == InputMode::A ? n : features->cols();
  }

  ClassificationResult res;
  res.classifier = classifier;
  res.mode = mode;
  for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
    const std::uint64_t rep_seed = opt.seed * 1000003ULL + rep;
    const auto fold = stratified_folds(nodes, labels, opt.folds, rep_seed);
    for (std::size_t f = 0; f < opt.folds; ++f) {
      Rng rng(rep_seed * 131ULL + f + 1);
      std::vector<std::size_t> train, test;
      for (std::size_t i = 0; i < nodes.size(); ++i) (fold[i] == f ? test : train).push_back(row_of_node[i]);
      std::shuffle(train.begin(), train.end(), rng);
      const auto n_hold = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opt.holdout * train.size())));
      std::vector<std::size_t> hold(train.begin(), train.begin() + static_cast<long>(n_hold));
      std::vector<std::size_t> fit(train.begin() + static_cast<long>(n_hold), train.end());
      if (fit.empty()) throw DataError("training fold too small for a held-out slice");

      Net net(classifier, mode, input, a_hat, in_dim, opt.hidden, classes, opt.dropout, rng);
      std::vector<Parameter*> ps;
      for (Parameter& p : net.params) ps.push_back(&p);
      Adam adam(ps, opt.lr);
      double best_loss = std::numeric_limits<double>::infinity();
      std::vector<Tensor> best = net.params.snapshot();
      int since_best = 0;
      for (int epoch = 0; epoch < opt.max_epochs && since_best < opt.patience; ++epoch) {
        net.params.zero_grad();
        {
          Tape tape;
          Var loss = softmax_cross_entropy(net.forward(tape, true, rng), row_labels, fit);
          if (!std::isfinite(loss.item())) throw DivergenceError("classifier loss diverged", epoch + 1);
          tape.backward(loss);
        }
        adam.step();
        Tape tape;
        const double held = softmax_cross_entropy(net.forward(tape, false, rng), row_labels, hold).item();
        if (held < best_loss) {
          best_loss = held;
          best = net.params.snapshot();
          since_best = 0;
        } else {
          ++since_best;
        }
      }
      net.params.restore(best);
      Tape tape;
      const Tensor logits = net.forward(tape, false, rng).value();
      std::size_t correct = 0;
      for (std::size_t r : test) correct += argmax_row(logits, r) == static_cast<std::size_t>(row_labels[r]);
      res.accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
    }
  }
  const double n = static_cast<double>(res.accuracies.size());
  res.mean = std::accumulate(res.accuracies.begin(), res.accuracies.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : res.accuracies) ss += (a - res.mean) * (a - res.mean);
  res.sd = res.accuracies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return res;
}

}  // namespace sat::eval
