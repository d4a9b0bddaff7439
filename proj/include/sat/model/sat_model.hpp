#pragma once

#include <cstdint>
#include <vector>

#include "sat/model/config.hpp"
#include "sat/numerics/ops.hpp"

namespace sat::model {

using num::Parameter;
using num::ParameterSet;
using num::SparseMatrix;
using num::Tape;
using num::Tensor;
using num::Var;

struct ModelDims {
  std::size_t n_nodes = 0;
  std::size_t n_attrs = 0;
  std::size_t hidden = 256;
  std::size_t latent = 64;
  std::size_t edge_dim = 64;
  bool operator==(const ModelDims&) const = default;
};

/// Per-forward settings. Parameters of a group without gradient are bound as frozen leaves.
struct ForwardContext {
  Tape& tape;
  bool training = false;
  num::Rng* rng = nullptr;  // required when training with dropout
  bool grad_generator = false;
  bool grad_discriminator = false;
};

/// Encoders E_X and E_A, shared decoders D_X and D_A, and the shared discriminator.
class SatModel {
 public:
  SatModel(const ModelDims& dims, Backbone backbone, double dropout, std::uint64_t seed, double gat_slope = 0.2);
  SatModel(const SatModel&) = delete;
  SatModel& operator=(const SatModel&) = delete;

  const ModelDims& dims() const { return dims_; }
  Backbone backbone() const { return backbone_; }
  double dropout() const { return dropout_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  /// Encoder and decoder parameters, in registration order.
  std::vector<Parameter*> generator_params();
  std::vector<Parameter*> discriminator_params();

  /// Two-layer perceptron on (sparse) attribute rows: F → h → d.
  Var encode_attributes(ForwardContext& ctx, const SparseMatrix& x);
  /// Two-layer GCN or one-head GAT over identity node features, giving N × d.
  Var encode_structure(ForwardContext& ctx, const SparseMatrix& a_hat, const SparseMatrix& mask);
  /// Attribute logits: d → h → F.
  Var decode_attributes(ForwardContext& ctx, Var z);
  /// Edge embedding: d → h → d_e.
  Var structure_embedding(ForwardContext& ctx, Var z);
  /// Pairwise logits E(z_src) · E(z_dst)ᵀ.
  Var decode_structure_logits(ForwardContext& ctx, Var z_src, Var z_dst);
  /// Discriminator logit per row: d → h → 1.
  Var discriminate(ForwardContext& ctx, Var z);

 private:
  struct Mlp {
    Parameter* w1;
    Parameter* b1;
    Parameter* w2;
    Parameter* b2;
  };

  Mlp add_mlp(const std::string& prefix, std::size_t in, std::size_t hidden, std::size_t out, num::Rng& rng,
              bool discriminator);
  Var bind(ForwardContext& ctx, Parameter* p) const;
  Var mlp(ForwardContext& ctx, const Mlp& m, Var x, bool use_dropout);
  Var gat_layer(ForwardContext& ctx, Var h, Parameter* a_src, Parameter* a_dst, const SparseMatrix& mask);

  ModelDims dims_;
  Backbone backbone_;
  double dropout_;
  double gat_slope_;
  ParameterSet params_;
  std::vector<const Parameter*> disc_set_;

  Mlp ex_{};
  Parameter* ea_w1_ = nullptr;  // N × h node embedding (identity input features)
  Parameter* ea_w2_ = nullptr;
  Parameter* ea_att1_src_ = nullptr;
  Parameter* ea_att1_dst_ = nullptr;
  Parameter* ea_att2_src_ = nullptr;
  Parameter* ea_att2_dst_ = nullptr;
  Mlp dx_{};
  Mlp da_{};
  Mlp disc_{};
};

}  // namespace sat::model
