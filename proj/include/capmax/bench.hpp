#ifndef CAPMAX_BENCH_HPP
#define CAPMAX_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "capmax/blocks.hpp"
#include "capmax/recovery.hpp"
#include "capmax/types.hpp"

namespace capmax {

/// One Monte-Carlo configuration: S_B active blocks per trial, complex
/// normal coefficients.
struct TrialSpec {
    BlockStructure bs;
    int S_B = 1;
    int trials = 100;
    std::uint64_t seed = 0;
};

/// Deterministic trial signal: S_B blocks drawn uniformly without
/// replacement, active entries i.i.d. CN(0,1). Depends only on
/// (seed, S_B, trial_index), never on evaluation order.
CVector random_block_sparse(const TrialSpec& spec, int trial_index);

enum class SolverKind { joint_l2l1, l1 };
std::string solver_name(SolverKind kind);

struct LabeledMatrix {
    std::string label;
    CMatrix A;
};

/// One (matrix, solver, sparsity level) cell of the accuracy curve.
struct CurveCell {
    std::string matrix_label;
    std::string solver;
    int S_B = 0;
    int S_total = 0;
    int trials = 0;
    int successes = 0;
    int nonconverged = 0;
    double rate = 0.0;
    bool beyond_guarantee = false;
};

struct AccuracyCurve {
    std::vector<int> levels;
    std::vector<CurveCell> cells; // matrix-major, then solver, then level
    double success_tol = 1e-3;
};

struct BenchOptions {
    std::vector<int> levels; // empty: 1 .. floor(M / (2L))
    int trials = 100;
    double success_tol = 1e-3;
    double eta_rel = 1e-8; // eta = eta_rel * ||y|| (noiseless convention)
    std::vector<SolverKind> solvers = {SolverKind::joint_l2l1, SolverKind::l1};
    RecoveryOptions solver_opts;
    std::uint64_t seed = 0;
    int threads = 0;
};

/// Paired-trial accuracy sweep: identical signals across matrices and
/// solvers at each (level, trial). Non-convergence counts as failure and is
/// also reported in its own column.
AccuracyCurve run_curve(const std::vector<LabeledMatrix>& matrices,
                        const BlockStructure& bs, const BenchOptions& opts);

void write_curve_csv(std::ostream& os, const AccuracyCurve& curve);

/// Lookup helper; throws when the cell does not exist.
const CurveCell& curve_cell(const AccuracyCurve& curve,
                            const std::string& matrix_label, SolverKind solver,
                            int S_B);

struct DemoReport {
    CVector x_true;
    CVector x_hat;
    double normalized_error = 0.0;
    RecoveryResult details;
};

/// One-instance reconstruction report (ground truth against joint l2/l1).
DemoReport single_instance_demo(const CMatrix& A, const BlockStructure& bs,
                                const CVector& x_true, double eta_rel = 1e-8,
                                const RecoveryOptions& opts = {});

} // namespace capmax

#endif
