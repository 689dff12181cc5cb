#include "capmax/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "capmax/errors.hpp"
#include "capmax/parallel.hpp"
#include "capmax/rng.hpp"

namespace capmax {

std::string solver_name(SolverKind kind) {
    return kind == SolverKind::joint_l2l1 ? "joint_l2l1" : "l1";
}

CVector random_block_sparse(const TrialSpec& spec, int trial_index) {
    if (spec.S_B < 1 || spec.S_B > spec.bs.K)
        throw InvalidArgument("S_B must lie in [1, K]");
    Rng rng = Rng::stream(spec.seed, 0xB5, static_cast<std::uint64_t>(spec.S_B),
                          static_cast<std::uint64_t>(trial_index));

    // Partial Fisher-Yates: first S_B entries are the active blocks.
    std::vector<int> ids(static_cast<std::size_t>(spec.bs.K));
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < spec.S_B; ++i) {
        const auto j = i + static_cast<int>(rng.below(
                               static_cast<std::uint64_t>(spec.bs.K - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }

    CVector x = CVector::Zero(spec.bs.N);
    std::vector<int> active(ids.begin(), ids.begin() + spec.S_B);
    std::sort(active.begin(), active.end());
    for (int k : active)
        for (int idx : spec.bs.block_indices[static_cast<std::size_t>(k)])
            x[idx] = rng.cnormal();
    return x;
}

AccuracyCurve run_curve(const std::vector<LabeledMatrix>& matrices,
                        const BlockStructure& bs, const BenchOptions& opts) {
    if (matrices.empty()) throw InvalidArgument("no matrices to benchmark");
    const Eigen::Index M = matrices[0].A.rows();
    for (const auto& lm : matrices)
        if (lm.A.rows() != M || lm.A.cols() != bs.N)
            throw InvalidArgument("benchmark matrices must share dimensions and "
                                  "match the block structure");
    if (opts.trials < 1) throw InvalidArgument("trials must be >= 1");
    if (opts.solvers.empty()) throw InvalidArgument("no solvers selected");

    std::vector<int> levels = opts.levels;
    if (levels.empty()) {
        const int top = static_cast<int>(M) / (2 * bs.L);
        for (int s = 1; s <= top; ++s) levels.push_back(s);
        if (levels.empty())
            throw InvalidArgument("default level range is empty (M < 2L); pass "
                                  "explicit levels");
    }
    for (int s : levels)
        if (s < 1 || s > bs.K) throw InvalidArgument("level out of [1, K]");

    // One solver object per (matrix, solver kind); the spectral setup is
    // shared across all trials.
    const BlockStructure singles = make_block_structure(bs.N, bs.N);
    std::vector<GroupBpSolver> solvers;
    solvers.reserve(matrices.size() * opts.solvers.size());
    for (const auto& lm : matrices)
        for (const SolverKind kind : opts.solvers)
            solvers.emplace_back(lm.A,
                                 kind == SolverKind::joint_l2l1 ? bs : singles,
                                 opts.solver_opts);

    struct TrialOutcome {
        bool success = false;
        bool nonconverged = false;
    };

    AccuracyCurve curve;
    curve.levels = levels;
    curve.success_tol = opts.success_tol;

    const std::size_t n_combo = matrices.size() * opts.solvers.size();
    std::vector<std::vector<TrialOutcome>> outcomes(
        levels.size() * n_combo,
        std::vector<TrialOutcome>(static_cast<std::size_t>(opts.trials)));

    for (std::size_t li = 0; li < levels.size(); ++li) {
        TrialSpec spec;
        spec.bs = bs;
        spec.S_B = levels[li];
        spec.trials = opts.trials;
        spec.seed = opts.seed;
        parallel_for(
            static_cast<std::size_t>(opts.trials),
            [&](std::size_t t) {
                const CVector x = random_block_sparse(spec, static_cast<int>(t));
                for (std::size_t mi = 0; mi < matrices.size(); ++mi) {
                    const CVector y = matrices[mi].A * x;
                    const double eta = opts.eta_rel * y.norm();
                    for (std::size_t si = 0; si < opts.solvers.size(); ++si) {
                        const auto& solver =
                            solvers[mi * opts.solvers.size() + si];
                        const RecoveryResult r = solver.solve(y, eta);
                        TrialOutcome& out =
                            outcomes[li * n_combo + mi * opts.solvers.size() + si]
                                    [t];
                        out.nonconverged = !r.converged;
                        out.success = r.converged &&
                                      is_success(r.x_hat, x, opts.success_tol);
                    }
                }
            },
            opts.threads);
    }

    for (std::size_t mi = 0; mi < matrices.size(); ++mi) {
        for (std::size_t si = 0; si < opts.solvers.size(); ++si) {
            for (std::size_t li = 0; li < levels.size(); ++li) {
                CurveCell cell;
                cell.matrix_label = matrices[mi].label;
                cell.solver = solver_name(opts.solvers[si]);
                cell.S_B = levels[li];
                cell.S_total = levels[li] * bs.L;
                cell.trials = opts.trials;
                cell.beyond_guarantee = 2 * cell.S_total > static_cast<int>(M);
                const auto& slot =
                    outcomes[li * n_combo + mi * opts.solvers.size() + si];
                for (const auto& o : slot) {
                    if (o.success) ++cell.successes;
                    if (o.nonconverged) ++cell.nonconverged;
                }
                cell.rate = static_cast<double>(cell.successes) /
                            static_cast<double>(cell.trials);
                curve.cells.push_back(std::move(cell));
            }
        }
    }
    return curve;
}

void write_curve_csv(std::ostream& os, const AccuracyCurve& curve) {
    os << "matrix_label,solver,S_B,S_total,trials,successes,rate,nonconverged,"
          "beyond_guarantee_flag\n";
    for (const auto& c : curve.cells) {
        os << c.matrix_label << ',' << c.solver << ',' << c.S_B << ','
           << c.S_total << ',' << c.trials << ',' << c.successes << ','
           << c.rate << ',' << c.nonconverged << ',' << (c.beyond_guarantee ? 1 : 0)
           << '\n';
    }
}

const CurveCell& curve_cell(const AccuracyCurve& curve,
                            const std::string& matrix_label, SolverKind solver,
                            int S_B) {
    const std::string sname = solver_name(solver);
    for (const auto& c : curve.cells)
        if (c.matrix_label == matrix_label && c.solver == sname && c.S_B == S_B)
            return c;
    throw InvalidArgument("curve cell not found: " + matrix_label + "/" + sname +
                          "/S_B=" + std::to_string(S_B));
}

DemoReport single_instance_demo(const CMatrix& A, const BlockStructure& bs,
                                const CVector& x_true, double eta_rel,
                                const RecoveryOptions& opts) {
    if (x_true.size() != A.cols())
        throw InvalidArgument("ground truth length does not match matrix");
    if (x_true.norm() == 0.0)
        throw InvalidArgument("ground truth must be nonzero");
    const CVector y = A * x_true;
    GroupBpSolver solver(A, bs, opts);
    DemoReport rep;
    rep.x_true = x_true;
    rep.details = solver.solve(y, eta_rel * y.norm());
    rep.x_hat = rep.details.x_hat;
    rep.normalized_error = (rep.x_hat - x_true).norm() / x_true.norm();
    return rep;
}

} // namespace capmax
