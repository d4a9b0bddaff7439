#include "sat/model/sat_model.hpp"

#include <algorithm>

#include "sat/numerics/init.hpp"

namespace sat::model {

using namespace num;

SatModel::SatModel(const ModelDims& dims, Backbone backbone, double dropout, std::uint64_t seed, double gat_slope)
    : dims_(dims), backbone_(backbone), dropout_(dropout), gat_slope_(gat_slope) {
  Rng rng(seed);
  const std::size_t h = dims.hidden, d = dims.latent;
  ex_ = add_mlp("ex", dims.n_attrs, h, d, rng, false);
  ea_w1_ = &params_.add("ea.w1", glorot_uniform(dims.n_nodes, h, rng));
  ea_w2_ = &params_.add("ea.w2", glorot_uniform(h, d, rng));
  if (backbone == Backbone::GAT) {
    ea_att1_src_ = &params_.add("ea.att1_src", glorot_uniform(h, 1, rng));
    ea_att1_dst_ = &params_.add("ea.att1_dst", glorot_uniform(h, 1, rng));
    ea_att2_src_ = &params_.add("ea.att2_src", glorot_uniform(d, 1, rng));
    ea_att2_dst_ = &params_.add("ea.att2_dst", glorot_uniform(d, 1, rng));
  }
  dx_ = add_mlp("dx", d, h, dims.n_attrs, rng, false);
  da_ = add_mlp("da", d, h, dims.edge_dim, rng, false);
  disc_ = add_mlp("disc", d, h, 1, rng, true);
}

SatModel::Mlp SatModel::add_mlp(const std::string& prefix, std::size_t in, std::size_t hidden, std::size_t out,
                                Rng& rng, bool discriminator) {
  Mlp m;
  m.w1 = &params_.add(prefix + ".w1", glorot_uniform(in, hidden, rng));
  m.b1 = &params_.add(prefix + ".b1", Tensor::matrix(1, hidden));
  m.w2 = &params_.add(prefix + ".w2", glorot_uniform(hidden, out, rng));
  m.b2 = &params_.add(prefix + ".b2", Tensor::matrix(1, out));
  if (discriminator) disc_set_.insert(disc_set_.end(), {m.w1, m.b1, m.w2, m.b2});
  return m;
}

std::vector<Parameter*> SatModel::generator_params() {
  std::vector<Parameter*> out;
  for (Parameter& p : params_) {
    if (std::find(disc_set_.begin(), disc_set_.end(), &p) == disc_set_.end()) out.push_back(&p);
  }
  return out;
}

std::vector<Parameter*> SatModel::discriminator_params() {
  std::vector<Parameter*> out;
  for (Parameter& p : params_) {
    if (std::find(disc_set_.begin(), disc_set_.end(), &p) != disc_set_.end()) out.push_back(&p);
  }
  return out;
}

Var SatModel::bind(ForwardContext& ctx, Parameter* p) const {
  const bool is_disc = std::find(disc_set_.begin(), disc_set_.end(), p) != disc_set_.end();
  const bool grad = is_disc ? ctx.grad_discriminator : ctx.grad_generator;
  return grad ? ctx.tape.parameter(*p) : ctx.tape.frozen(*p);
}

Var SatModel::mlp(ForwardContext& ctx, const Mlp& m, Var x, bool use_dropout) {
  Var h = relu(add_bias(matmul(x, bind(ctx, m.w1)), bind(ctx, m.b1)));
  if (use_dropout && ctx.training && dropout_ > 0.0) h = num::dropout(h, dropout_, true, *ctx.rng);
  return add_bias(matmul(h, bind(ctx, m.w2)), bind(ctx, m.b2));
}

Var SatModel::encode_attributes(ForwardContext& ctx, const SparseMatrix& x) {
  Var h = relu(add_bias(spmm(x, bind(ctx, ex_.w1)), bind(ctx, ex_.b1)));
  if (ctx.training && dropout_ > 0.0) h = num::dropout(h, dropout_, true, *ctx.rng);
  return add_bias(matmul(h, bind(ctx, ex_.w2)), bind(ctx, ex_.b2));
}

Var SatModel::gat_layer(ForwardContext& ctx, Var h, Parameter* a_src, Parameter* a_dst, const SparseMatrix& mask) {
  Var s = matmul(h, bind(ctx, a_src));
  Var t = matmul(h, bind(ctx, a_dst));
  Var e = leaky_relu(edge_scores(mask, s, t), gat_slope_);
  Var alpha = edge_softmax(mask, e);
  return sparse_matmul(mask, alpha, h);
}

Var SatModel::encode_structure(ForwardContext& ctx, const SparseMatrix& a_hat, const SparseMatrix& mask) {
  Var w1 = bind(ctx, ea_w1_);
  Var w2 = bind(ctx, ea_w2_);
  Var h;
  if (backbone_ == Backbone::GCN) {
    h = relu(spmm(a_hat, w1));
  } else {
    h = relu(gat_layer(ctx, w1, ea_att1_src_, ea_att1_dst_, mask));
  }
  if (ctx.training && dropout_ > 0.0) h = num::dropout(h, dropout_, true, *ctx.rng);
  Var g = matmul(h, w2);
  if (backbone_ == Backbone::GCN) return spmm(a_hat, g);
  return gat_layer(ctx, g, ea_att2_src_, ea_att2_dst_, mask);
}

Var SatModel::decode_attributes(ForwardContext& ctx, Var z) { return mlp(ctx, dx_, z, false); }

Var SatModel::structure_embedding(ForwardContext& ctx, Var z) { return mlp(ctx, da_, z, false); }

Var SatModel::decode_structure_logits(ForwardContext& ctx, Var z_src, Var z_dst) {
  Var es = structure_embedding(ctx, z_src);
  Var ed = z_src.id() == z_dst.id() ? es : structure_embedding(ctx, z_dst);
  return matmul_nt(es, ed);
}

Var SatModel::discriminate(ForwardContext& ctx, Var z) { return mlp(ctx, disc_, z, false); }

}  // namespace sat::model
