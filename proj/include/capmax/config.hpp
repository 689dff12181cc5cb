#ifndef CAPMAX_CONFIG_HPP
#define CAPMAX_CONFIG_HPP

#include <memory>
#include <string>
#include <vector>

#include "capmax/bench.hpp"
#include "capmax/blocks.hpp"
#include "capmax/design.hpp"
#include "capmax/models.hpp"
#include "capmax/recovery.hpp"

namespace capmax {

struct ModelConfig {
    std::string kind; // "fourier" | "em" | "dense"
    int M = 0;
    int N = 0;
    EmGridSpec em;
};

struct BlocksConfig {
    bool given = false;
    std::string layout; // "contiguous" | "explicit"
    int K = 0;
    int N = 0; // optional; defaults to the model width
    std::vector<std::vector<int>> indices;
};

/// One experiment description: everything needed to rebuild a figure-level
/// run from a single file. Unknown fields anywhere are rejected.
struct RunConfig {
    std::uint64_t seed = 0;
    double beta = 1e-6;
    std::string output_dir;
    ModelConfig model;
    BlocksConfig blocks;
    DesignOptions design;
    BenchOptions bench;
    RecoveryOptions recovery;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

std::unique_ptr<SensingModel> build_model(const RunConfig& cfg);
BlockStructure build_blocks(const RunConfig& cfg, const SensingModel& model);

} // namespace capmax

#endif
