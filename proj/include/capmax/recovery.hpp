#ifndef CAPMAX_RECOVERY_HPP
#define CAPMAX_RECOVERY_HPP

#include <vector>

#include "capmax/blocks.hpp"
#include "capmax/types.hpp"

namespace capmax {

/// Joint l2/l1 recovery instance:
/// minimize sum_k ||P_k x||_2  subject to ||A x - y||_2 <= eta.
struct RecoveryProblem {
    CMatrix A;
    CVector y;
    BlockStructure bs;
    double eta = 0.0;
};

struct RecoveryOptions {
    double tol = 1e-8; // relative primal/dual consistency tolerance
    int max_iter = 20000;
    double mu0 = 1.0;           // initial splitting penalty (normalized problem)
    bool adapt_penalty = true;  // residual-balancing penalty updates
    int adapt_until = 2000;     // freeze the penalty after this many iterations
    bool record_objective = false;
};

struct RecoveryResult {
    CVector x_hat;
    double residual = 0.0;  // ||A x_hat - y||
    double objective = 0.0; // sum_k ||P_k x_hat||
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; // filled when record_objective is set
};

/// sum_k ||x[block_k]||_2; equals ||x||_1 for singleton blocks.
double group_objective(const CVector& x, const BlockStructure& bs);

/// Operator-splitting solver bound to one matrix: the eigendecomposition of
/// A A^H backing the residual-ball projection is computed once, so repeated
/// solves against the same matrix (benchmark trials) are cheap.
class GroupBpSolver {
  public:
    GroupBpSolver(CMatrix A, BlockStructure bs, RecoveryOptions opts = {});
    RecoveryResult solve(const CVector& y, double eta) const;

    const CMatrix& matrix() const { return A_; }
    const BlockStructure& blocks() const { return bs_; }

  private:
    /// Euclidean projection of v onto {x : ||A x - y|| <= eta}.
    CVector project_ball(const CVector& v, const CVector& y, double eta) const;

    CMatrix A_;
    BlockStructure bs_;
    RecoveryOptions opts_;
    CMatrix U_;      // eigenvectors of A A^H
    RVector lambda_; // eigenvalues of A A^H, ascending
    CMatrix B_;      // A^H U
};

RecoveryResult solve_group_bp(const RecoveryProblem& prob,
                              const RecoveryOptions& opts = {});

/// Standard l1 minimization: the same solver with singleton blocks.
RecoveryResult solve_l1(const RecoveryProblem& prob,
                        const RecoveryOptions& opts = {});

/// Exact-recovery criterion: ||x_hat - x_true|| / ||x_true|| <= tol_rel.
bool is_success(const CVector& x_hat, const CVector& x_true,
                double tol_rel = 1e-3);

} // namespace capmax

#endif
