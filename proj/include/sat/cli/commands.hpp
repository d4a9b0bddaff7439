#pragma once

namespace sat::cli {

/// Entry point of the satgraph tool. Returns 0 on success, 2 on a configuration error,
/// 3 on a data error and 4 on numerical divergence.
int run_cli(int argc, char** argv);

}  // namespace sat::cli
