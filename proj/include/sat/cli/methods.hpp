#pragma once

#include <array>
#include <string>
#include <vector>

#include "sat/baselines/baselines.hpp"
#include "sat/model/config.hpp"

namespace sat::cli {

enum class Method { SatGcn, SatGat, SatNoSelf, SatNoCross, SatNoAdver, NeighAggre, Vae, GnnGcn, GnnGat };

inline constexpr std::array<Method, 9> kAllMethods = {Method::SatGcn,     Method::SatGat,     Method::SatNoSelf,
                                                      Method::SatNoCross, Method::SatNoAdver, Method::NeighAggre,
                                                      Method::Vae,        Method::GnnGcn,     Method::GnnGat};

/// "sat-gcn", "sat-gat", "sat-no-self", "sat-no-cross", "sat-no-adver", "neighaggre", "vae", "gnn-gcn", "gnn-gat"
std::string to_string(Method m);
/// Throws ConfigError listing the valid names.
Method parse_method(const std::string& s);

/// Methods trained through the SAT loop (the SAT variants and the GNN regressions).
bool uses_sat_model(Method m);
/// Link prediction needs a trained structure decoder, so only the SAT variants qualify.
bool supports(Method m, model::Task task);
/// Throws ConfigError when the method cannot run the task.
void require_supported(Method m, model::Task task);

/// Cross-stream weight chosen on validation for each dataset and task; 10 for unknown names.
double default_lambda_c(const std::string& dataset, model::Task task);

/// Profiling cut-offs: {3, 5, 10} for the sparse-attribute Steam data, {10, 20, 50} otherwise.
std::vector<std::size_t> default_ks(const std::string& dataset);

/// Backbone and loss terms of a SAT-loop method applied to `base`.
model::TrainConfig method_config(Method m, model::TrainConfig base);

}  // namespace sat::cli
