#include "capmax/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capmax/errors.hpp"

namespace capmax {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw InvalidArgument("config: unknown field \"" + it.key() + "\" in " +
                                  ctx);
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("config: bad value for \"") + key + "\"");
    }
}

template <typename T>
T require(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key))
        throw InvalidArgument("config: missing \"" + std::string(key) + "\" in " +
                              ctx);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("config: bad value for \"") + key + "\"");
    }
}

ModelConfig parse_model(const json& j) {
    check_keys(j,
               {"kind", "M", "N", "grid_nx", "grid_ny", "extent",
                "antenna_height", "aperture", "antennas", "wavelength"},
               "model");
    ModelConfig mc;
    mc.kind = require<std::string>(j, "kind", "model");
    if (mc.kind == "fourier" || mc.kind == "dense") {
        mc.M = require<int>(j, "M", "model");
        mc.N = require<int>(j, "N", "model");
    } else if (mc.kind == "em") {
        mc.em.grid_nx = get_or(j, "grid_nx", 12);
        mc.em.grid_ny = get_or(j, "grid_ny", 12);
        mc.em.extent = get_or(j, "extent", 5.0);
        mc.em.antenna_height = get_or(j, "antenna_height", 5.0);
        mc.em.aperture = get_or(j, "aperture", 2.5);
        mc.em.num_antennas = get_or(j, "antennas", 64);
        mc.em.wavelength = get_or(j, "wavelength", 1.0);
        mc.M = mc.em.num_antennas;
        mc.N = mc.em.grid_nx * mc.em.grid_ny;
    } else {
        throw InvalidArgument("config: model kind must be fourier, em, or dense");
    }
    return mc;
}

BlocksConfig parse_blocks(const json& j) {
    check_keys(j, {"layout", "K", "N", "indices"}, "blocks");
    BlocksConfig bc;
    bc.given = true;
    bc.layout = require<std::string>(j, "layout", "blocks");
    if (bc.layout == "contiguous") {
        bc.K = require<int>(j, "K", "blocks");
        bc.N = get_or(j, "N", 0);
    } else if (bc.layout == "explicit") {
        bc.indices = require<std::vector<std::vector<int>>>(j, "indices", "blocks");
        bc.K = static_cast<int>(bc.indices.size());
        bc.N = get_or(j, "N", 0);
    } else {
        throw InvalidArgument("config: blocks layout must be contiguous or explicit");
    }
    return bc;
}

void parse_design(const json& j, DesignOptions& d) {
    check_keys(j,
               {"rho0", "rho_growth", "violation_shrink", "inner_grad_tol",
                "inner_tol_scale", "tol_c", "tol_f", "max_outer", "max_inner",
                "armijo_factor", "armijo_c1", "max_backtracks", "bb_min", "bb_max"},
               "design");
    d.rho0 = get_or(j, "rho0", d.rho0);
    d.rho_growth = get_or(j, "rho_growth", d.rho_growth);
    d.violation_shrink = get_or(j, "violation_shrink", d.violation_shrink);
    d.inner_grad_tol = get_or(j, "inner_grad_tol", d.inner_grad_tol);
    d.inner_tol_scale = get_or(j, "inner_tol_scale", d.inner_tol_scale);
    d.tol_c = get_or(j, "tol_c", d.tol_c);
    d.tol_f = get_or(j, "tol_f", d.tol_f);
    d.max_outer = get_or(j, "max_outer", d.max_outer);
    d.max_inner = get_or(j, "max_inner", d.max_inner);
    d.armijo_factor = get_or(j, "armijo_factor", d.armijo_factor);
    d.armijo_c1 = get_or(j, "armijo_c1", d.armijo_c1);
    d.max_backtracks = get_or(j, "max_backtracks", d.max_backtracks);
    d.bb_min = get_or(j, "bb_min", d.bb_min);
    d.bb_max = get_or(j, "bb_max", d.bb_max);
}

void parse_bench(const json& j, BenchOptions& b) {
    check_keys(j, {"trials", "levels", "success_tol", "eta_rel", "solvers"},
               "benchmark");
    b.trials = get_or(j, "trials", b.trials);
    b.levels = get_or(j, "levels", b.levels);
    b.success_tol = get_or(j, "success_tol", b.success_tol);
    b.eta_rel = get_or(j, "eta_rel", b.eta_rel);
    if (j.contains("solvers")) {
        b.solvers.clear();
        for (const auto& name : require<std::vector<std::string>>(j, "solvers",
                                                                  "benchmark")) {
            if (name == "joint_l2l1")
                b.solvers.push_back(SolverKind::joint_l2l1);
            else if (name == "l1")
                b.solvers.push_back(SolverKind::l1);
            else
                throw InvalidArgument("config: unknown solver \"" + name + "\"");
        }
    }
}

void parse_recovery(const json& j, RecoveryOptions& r) {
    check_keys(j, {"tol", "max_iter"}, "recovery");
    r.tol = get_or(j, "tol", r.tol);
    r.max_iter = get_or(j, "max_iter", r.max_iter);
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config: top level must be an object");
    check_keys(j,
               {"seed", "beta", "output_dir", "model", "blocks", "design",
                "benchmark", "recovery"},
               "top level");

    RunConfig cfg;
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
    cfg.beta = get_or(j, "beta", 1e-6);
    if (cfg.beta < 0.0) throw InvalidArgument("config: beta must be nonnegative");
    cfg.output_dir = get_or<std::string>(j, "output_dir", "");
    if (!j.contains("model"))
        throw InvalidArgument("config: missing \"model\" section");
    cfg.model = parse_model(j.at("model"));
    if (j.contains("blocks")) cfg.blocks = parse_blocks(j.at("blocks"));
    if (j.contains("design")) parse_design(j.at("design"), cfg.design);
    if (j.contains("benchmark")) parse_bench(j.at("benchmark"), cfg.bench);
    if (j.contains("recovery")) parse_recovery(j.at("recovery"), cfg.recovery);
    cfg.design.beta = cfg.beta;
    cfg.design.seed = cfg.seed;
    cfg.bench.seed = cfg.seed;
    cfg.bench.solver_opts = cfg.recovery;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::unique_ptr<SensingModel> build_model(const RunConfig& cfg) {
    if (cfg.model.kind == "fourier") return make_fourier(cfg.model.M, cfg.model.N);
    if (cfg.model.kind == "dense") return make_dense(cfg.model.M, cfg.model.N);
    return make_em(cfg.model.em);
}

BlockStructure build_blocks(const RunConfig& cfg, const SensingModel& model) {
    const int N = model.cols();
    if (!cfg.blocks.given) {
        // The imaging model carries its own spatial-square convention.
        if (const auto* em = dynamic_cast<const EmModel*>(&model)) {
            const int tiles = 9;
            return em->block_structure(tiles);
        }
        throw InvalidArgument("config: \"blocks\" section is required for this model");
    }
    if (cfg.blocks.N != 0 && cfg.blocks.N != N)
        throw InvalidArgument("config: blocks.N = " + std::to_string(cfg.blocks.N) +
                              " does not match the model width " + std::to_string(N));
    if (cfg.blocks.layout == "contiguous")
        return make_block_structure(N, cfg.blocks.K);
    return make_block_structure(N, cfg.blocks.indices);
}

} // namespace capmax
