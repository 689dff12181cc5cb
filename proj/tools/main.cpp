// capmax command-line front end: design -> capacity/ric -> benchmark -> demo.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capmax/bench.hpp"
#include "capmax/capacity.hpp"
#include "capmax/config.hpp"
#include "capmax/design.hpp"
#include "capmax/errors.hpp"
#include "capmax/matrix_io.hpp"
#include "capmax/parallel.hpp"
#include "capmax/recovery.hpp"
#include "capmax/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> tol_success;
    int threads = 0;
};

capmax::RunConfig load_and_override(const CommonArgs& args) {
    capmax::RunConfig cfg = capmax::load_config(args.config_path);
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.design.seed = *args.seed;
        cfg.bench.seed = *args.seed;
    }
    if (args.trials) cfg.bench.trials = *args.trials;
    if (args.tol_success) cfg.bench.success_tol = *args.tol_success;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (cfg.output_dir.empty()) cfg.output_dir = "out";
    cfg.design.threads = args.threads;
    cfg.bench.threads = args.threads;
    return cfg;
}

fs::path ensure_out_dir(const capmax::RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

void write_trace_csv(const fs::path& path,
                     const std::vector<capmax::OuterTraceRow>& trace) {
    std::ofstream os(path);
    os << "iteration,min_capacity,violation,rho\n";
    char buf[128];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.16e,%.16e,%.16e\n", row.iter,
                      row.min_capacity, row.violation, row.rho);
        os << buf;
    }
}

int cmd_design(const CommonArgs& args) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);
    const fs::path dir = ensure_out_dir(cfg);

    const capmax::RVector p0 = model->random_init(cfg.seed);
    const capmax::CMatrix A0 = model->assemble(p0);
    const capmax::CapacityReport base = capmax::capacity_report(A0, bs, cfg.beta);
    capmax::write_matrix_file((dir / "baseline_matrix.txt").string(), A0);
    capmax::write_real_vector_file((dir / "p_baseline.txt").string(), p0);

    const capmax::DesignResult result = capmax::design(*model, bs, p0, cfg.design);
    const capmax::CMatrix Aopt = model->assemble(result.p_final);
    capmax::write_matrix_file((dir / "optimized_matrix.txt").string(), Aopt);
    capmax::write_real_vector_file((dir / "p_optimized.txt").string(),
                                   result.p_final);
    write_trace_csv(dir / "design_trace.csv", result.trace);

    json summary;
    summary["model"] = model->kind();
    summary["seed"] = cfg.seed;
    summary["beta"] = cfg.beta;
    summary["baseline_min_capacity"] = base.min_capacity;
    summary["optimized_min_capacity"] = result.report.min_capacity;
    summary["improvement"] = result.report.min_capacity - base.min_capacity;
    summary["termination"] = result.termination;
    summary["final_violation"] = result.final_violation;
    summary["outer_iterations"] = result.trace.size();
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";

    std::cout << "design: min capacity " << base.min_capacity << " -> "
              << result.report.min_capacity << " (improvement "
              << result.report.min_capacity - base.min_capacity << ", "
              << result.termination << ")\n";
    return 0;
}

int cmd_capacity(const CommonArgs& args, const std::string& matrix_path) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);
    const capmax::CMatrix A = capmax::read_matrix_file(matrix_path);
    const capmax::CapacityReport rep = capmax::capacity_report(A, bs, cfg.beta);
    const auto pairs = capmax::pair_supports(bs);

    const fs::path dir = ensure_out_dir(cfg);
    std::ofstream csv(dir / "capacity.csv");
    csv << "pair_id,block_k,block_j,capacity\n";
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        std::cout << "pair " << pairs[r].pair_id << " (" << pairs[r].block_k << ","
                  << pairs[r].block_j << ") capacity "
                  << rep.per_pair[static_cast<Eigen::Index>(r)] << "\n";
        csv << pairs[r].pair_id << ',' << pairs[r].block_k << ','
            << pairs[r].block_j << ',' << rep.per_pair[static_cast<Eigen::Index>(r)]
            << '\n';
    }
    std::cout << "min capacity " << rep.min_capacity << " at pair ("
              << pairs[static_cast<std::size_t>(rep.argmin_pair)].block_k << ","
              << pairs[static_cast<std::size_t>(rep.argmin_pair)].block_j << ")\n";
    return 0;
}

int cmd_ric(const CommonArgs& args, const std::string& matrix_path, int T,
            std::uint64_t cap) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);
    const capmax::CMatrix A = capmax::read_matrix_file(matrix_path);
    capmax::RicOptions opts;
    opts.enumeration_cap = cap;
    opts.threads = args.threads;
    const capmax::BlockRicResult res = capmax::block_ric(A, bs, T, opts);

    const fs::path dir = ensure_out_dir(cfg);
    std::ofstream csv(dir / "ric.csv");
    csv << "quantity,value,support\n";
    auto support_str = [](const std::vector<int>& s) {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i)
            out += (i ? "+" : "") + std::to_string(s[i]);
        return out;
    };
    csv << "lambda_min," << res.lambda_min << ',' << support_str(res.support_lo)
        << '\n';
    csv << "lambda_max," << res.lambda_max << ',' << support_str(res.support_hi)
        << '\n';
    csv << "delta," << res.delta << ",\n";
    std::cout << "block RIC delta_{L," << T << "} = " << res.delta
              << " (lambda_min " << res.lambda_min << " on blocks "
              << support_str(res.support_lo) << ", lambda_max " << res.lambda_max
              << " on blocks " << support_str(res.support_hi) << ")\n";
    return 0;
}

int cmd_recover(const CommonArgs& args, const std::string& matrix_path,
                const std::string& y_path, const std::string& truth_path,
                std::optional<double> eta_abs) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);
    capmax::RecoveryProblem prob;
    prob.A = capmax::read_matrix_file(matrix_path);
    prob.y = capmax::read_vector_file(y_path);
    prob.bs = bs;
    prob.eta = eta_abs ? *eta_abs : cfg.bench.eta_rel * prob.y.norm();

    const capmax::RecoveryResult res = capmax::solve_group_bp(prob, cfg.recovery);
    const fs::path dir = ensure_out_dir(cfg);
    capmax::write_vector_file((dir / "x_hat.txt").string(), res.x_hat);

    std::cout << "recover: residual " << res.residual << " objective "
              << res.objective << " iterations " << res.iterations
              << " converged " << (res.converged ? 1 : 0);
    if (!truth_path.empty()) {
        const capmax::CVector xt = capmax::read_vector_file(truth_path);
        const bool ok = capmax::is_success(res.x_hat, xt, cfg.bench.success_tol);
        std::cout << " success " << (ok ? 1 : 0) << " rel_error "
                  << (res.x_hat - xt).norm() / xt.norm();
    }
    std::cout << "\n";
    return 0;
}

int cmd_benchmark(const CommonArgs& args,
                  const std::vector<std::string>& matrix_specs) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);

    std::vector<capmax::LabeledMatrix> mats;
    for (const auto& spec : matrix_specs) {
        const auto pos = spec.find('=');
        capmax::LabeledMatrix lm;
        if (pos == std::string::npos) {
            lm.label = fs::path(spec).stem().string();
            lm.A = capmax::read_matrix_file(spec);
        } else {
            lm.label = spec.substr(0, pos);
            lm.A = capmax::read_matrix_file(spec.substr(pos + 1));
        }
        mats.push_back(std::move(lm));
    }

    const capmax::AccuracyCurve curve = capmax::run_curve(mats, bs, cfg.bench);
    const fs::path dir = ensure_out_dir(cfg);
    std::ofstream csv(dir / "accuracy_curve.csv");
    capmax::write_curve_csv(csv, curve);
    capmax::write_curve_csv(std::cout, curve);
    return 0;
}

int cmd_demo(const CommonArgs& args, const std::string& baseline_path,
             const std::string& optimized_path) {
    const capmax::RunConfig cfg = load_and_override(args);
    const auto model = capmax::build_model(cfg);
    const capmax::BlockStructure bs = capmax::build_blocks(cfg, *model);
    const fs::path dir = ensure_out_dir(cfg);

    capmax::CMatrix A0, A1;
    if (!baseline_path.empty()) {
        A0 = capmax::read_matrix_file(baseline_path);
    } else {
        A0 = model->assemble(model->random_init(cfg.seed));
    }
    if (!optimized_path.empty()) {
        A1 = capmax::read_matrix_file(optimized_path);
    } else {
        const capmax::RVector p0 = model->random_init(cfg.seed);
        const capmax::DesignResult res = capmax::design(*model, bs, p0, cfg.design);
        A1 = model->assemble(res.p_final);
    }
    if (A0.rows() != A1.rows() || A0.cols() != A1.cols() || A0.cols() != bs.N)
        throw capmax::InvalidArgument("demo: matrix dimensions disagree");

    // Two-block scene, deterministic from the seed.
    capmax::TrialSpec spec;
    spec.bs = bs;
    spec.S_B = std::min(2, bs.K);
    spec.seed = cfg.seed;
    const capmax::CVector x_true = capmax::random_block_sparse(spec, 0);

    const auto base = capmax::single_instance_demo(A0, bs, x_true,
                                                   cfg.bench.eta_rel, cfg.recovery);
    const auto opt = capmax::single_instance_demo(A1, bs, x_true,
                                                  cfg.bench.eta_rel, cfg.recovery);

    capmax::write_vector_file((dir / "demo_x_true.txt").string(), x_true);
    capmax::write_vector_file((dir / "demo_x_hat_baseline.txt").string(),
                              base.x_hat);
    capmax::write_vector_file((dir / "demo_x_hat_optimized.txt").string(),
                              opt.x_hat);

    // For the imaging model, also emit plot-ready magnitude grids.
    if (const auto* em = dynamic_cast<const capmax::EmModel*>(model.get())) {
        const int nx = em->grid().grid_nx, ny = em->grid().grid_ny;
        auto write_grid = [&](const fs::path& path, const capmax::CVector& v) {
            std::ofstream os(path);
            for (int iy = 0; iy < ny; ++iy) {
                for (int ix = 0; ix < nx; ++ix) {
                    if (ix) os << ',';
                    os << std::abs(v[iy * nx + ix]);
                }
                os << '\n';
            }
        };
        write_grid(dir / "demo_grid_truth.csv", x_true);
        write_grid(dir / "demo_grid_baseline.csv", base.x_hat);
        write_grid(dir / "demo_grid_optimized.csv", opt.x_hat);
    }

    json rep;
    rep["baseline_normalized_error"] = base.normalized_error;
    rep["optimized_normalized_error"] = opt.normalized_error;
    rep["eta_rel"] = cfg.bench.eta_rel;
    rep["seed"] = cfg.seed;
    std::ofstream(dir / "demo_report.json") << rep.dump(2) << "\n";
    std::cout << "demo: normalized error baseline " << base.normalized_error
              << ", optimized " << opt.normalized_error << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensing-matrix design by capacity maximization for "
                 "block-sparse recovery"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string matrix_path, y_path, truth_path;
    std::string baseline_path, optimized_path;
    std::vector<std::string> matrix_specs;
    int ric_T = 2;
    std::uint64_t ric_cap = 1000000;
    std::optional<double> eta_abs;

    auto add_common = [&](CLI::App* cmd, bool need_config = true) {
        auto* opt = cmd->add_option("--config", args.config_path, "run config (JSON)");
        if (need_config) opt->required();
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--seed", args.seed, "override the config seed");
        cmd->add_option("--threads", args.threads,
                        "worker threads (0 = all cores)");
        cmd->add_option("--trials", args.trials, "override benchmark trials");
        cmd->add_option("--tol-success", args.tol_success,
                        "override the success tolerance");
    };

    auto* design = app.add_subcommand("design", "optimize a sensing matrix");
    add_common(design);

    auto* capacity = app.add_subcommand("capacity", "per-pair capacity report");
    add_common(capacity);
    capacity->add_option("--matrix", matrix_path, "matrix file")->required();

    auto* ric = app.add_subcommand("ric", "exhaustive block RIC");
    add_common(ric);
    ric->add_option("--matrix", matrix_path, "matrix file")->required();
    ric->add_option("--T", ric_T, "block sparsity level");
    ric->add_option("--cap", ric_cap, "enumeration cap");

    auto* recover = app.add_subcommand("recover", "solve one recovery instance");
    add_common(recover);
    recover->add_option("--matrix", matrix_path, "matrix file")->required();
    recover->add_option("--measurements", y_path, "measurement vector file")
        ->required();
    recover->add_option("--truth", truth_path, "ground-truth vector file");
    recover->add_option("--eta", eta_abs, "absolute residual tolerance");

    auto* benchmark = app.add_subcommand("benchmark", "accuracy-vs-sparsity sweep");
    add_common(benchmark);
    benchmark
        ->add_option("--matrix", matrix_specs,
                     "matrix file, optionally label=path; repeatable")
        ->required();

    auto* demo = app.add_subcommand("demo", "single-instance reconstruction demo");
    add_common(demo);
    demo->add_option("--baseline", baseline_path, "baseline matrix file");
    demo->add_option("--optimized", optimized_path, "optimized matrix file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    capmax::set_default_threads(args.threads);
    try {
        if (design->parsed()) return cmd_design(args);
        if (capacity->parsed()) return cmd_capacity(args, matrix_path);
        if (ric->parsed()) return cmd_ric(args, matrix_path, ric_T, ric_cap);
        if (recover->parsed())
            return cmd_recover(args, matrix_path, y_path, truth_path, eta_abs);
        if (benchmark->parsed()) return cmd_benchmark(args, matrix_specs);
        if (demo->parsed()) return cmd_demo(args, baseline_path, optimized_path);
    } catch (const capmax::NumericalError& e) {
        std::cerr << "capmax: numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "capmax: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
