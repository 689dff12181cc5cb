#include "capmax/recovery.hpp"

#include <cmath>
#include <string>

#include "capmax/errors.hpp"

namespace capmax {

namespace {

/// Joint shrinkage: scale every block toward zero by max(0, 1 - t/||block||).
void block_shrink(const CVector& v, const BlockStructure& bs, double t,
                  CVector& out) {
    for (const auto& block : bs.block_indices) {
        double nsq = 0.0;
        for (int i : block) nsq += std::norm(v[i]);
        const double nv = std::sqrt(nsq);
        const double factor = nv > t ? 1.0 - t / nv : 0.0;
        for (int i : block) out[i] = factor * v[i];
    }
}

} // namespace

double group_objective(const CVector& x, const BlockStructure& bs) {
    if (x.size() != bs.N)
        throw InvalidArgument("vector length does not match block structure");
    double acc = 0.0;
    for (const auto& block : bs.block_indices) {
        double nsq = 0.0;
        for (int i : block) nsq += std::norm(x[i]);
        acc += std::sqrt(nsq);
    }
    return acc;
}

GroupBpSolver::GroupBpSolver(CMatrix A, BlockStructure bs, RecoveryOptions opts)
    : A_(std::move(A)), bs_(std::move(bs)), opts_(opts) {
    if (A_.cols() != bs_.N)
        throw InvalidArgument("matrix has " + std::to_string(A_.cols()) +
                              " columns, block structure expects " +
                              std::to_string(bs_.N));
    if (opts_.tol <= 0.0 || opts_.max_iter < 1)
        throw InvalidArgument("invalid recovery options");
    const CMatrix AAH = A_ * A_.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(AAH);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of A A^H failed");
    U_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    B_ = A_.adjoint() * U_;
}

CVector GroupBpSolver::project_ball(const CVector& v, const CVector& y,
                                    double eta) const {
    CVector r = A_ * v - y;
    const double rn = r.norm();
    if (rn <= eta) return v;

    const CVector rt = U_.adjoint() * r;
    const Eigen::Index M = lambda_.size();
    const double lam_max = std::max(lambda_[M - 1], 0.0);
    const double lam_cut = lam_max * 1e-13;

    // Energy outside the (numerical) range of A cannot be removed.
    double floor_sq = 0.0;
    for (Eigen::Index m = 0; m < M; ++m)
        if (lambda_[m] <= lam_cut) floor_sq += std::norm(rt[m]);
    if (std::sqrt(floor_sq) > eta + 1e-9 * (1.0 + y.norm()))
        throw NumericalError(
            "infeasible recovery problem: y is not within eta of the range of A");

    CVector w(M);
    if (eta <= 0.0) {
        // Equality projection through the pseudo-inverse.
        for (Eigen::Index m = 0; m < M; ++m)
            w[m] = lambda_[m] > lam_cut ? rt[m] / lambda_[m] : Complex(0, 0);
        return v - B_ * w;
    }

    // Solve sum_m |rt_m|^2 / (1 + mu*lambda_m)^2 = eta^2 for mu >= 0;
    // monotone decreasing, so bisection on a doubling bracket is safe.
    auto phi = [&](double mu) {
        double acc = 0.0;
        for (Eigen::Index m = 0; m < M; ++m) {
            const double den = 1.0 + mu * lambda_[m];
            acc += std::norm(rt[m]) / (den * den);
        }
        return acc;
    };
    const double target = eta * eta;
    double lo = 0.0, hi = 1.0;
    while (phi(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e30)
            throw NumericalError("ball projection failed to bracket the multiplier");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    const double mu = hi; // feasible side: phi(hi) <= eta^2
    for (Eigen::Index m = 0; m < M; ++m)
        w[m] = mu / (1.0 + mu * lambda_[m]) * rt[m];
    return v - B_ * w;
}

RecoveryResult GroupBpSolver::solve(const CVector& y, double eta) const {
    if (y.size() != A_.rows())
        throw InvalidArgument("measurement length does not match matrix rows");
    if (eta < 0.0) throw InvalidArgument("eta must be nonnegative");

    RecoveryResult res;
    const double scale = y.norm();
    if (scale == 0.0) {
        res.x_hat = CVector::Zero(A_.cols());
        res.converged = true;
        return res;
    }
    const CVector ys = y / scale;
    const double etas = eta / scale;
    const Eigen::Index N = A_.cols();

    CVector x = CVector::Zero(N), z = CVector::Zero(N), u = CVector::Zero(N);
    CVector z_prev(N), xu(N);
    double mu = opts_.mu0;
    const double sqrt_n = std::sqrt(static_cast<double>(N));

    int it = 0;
    bool converged = false;
    for (it = 1; it <= opts_.max_iter; ++it) {
        x = project_ball(z - u, ys, etas);
        z_prev = z;
        xu = x + u;
        block_shrink(xu, bs_, 1.0 / mu, z);
        u += x - z;

        if (opts_.record_objective)
            res.objective_trace.push_back(group_objective(x, bs_) * scale);

        const double r_norm = (x - z).norm();
        const double s_norm = mu * (z - z_prev).norm();
        const double eps_pri =
            opts_.tol * std::max({x.norm(), z.norm(), 1e-3 * sqrt_n});
        const double eps_dual = opts_.tol * std::max(mu * u.norm(), 1e-3 * sqrt_n);
        if (r_norm <= eps_pri && s_norm <= eps_dual) {
            converged = true;
            break;
        }

        if (opts_.adapt_penalty && it <= opts_.adapt_until) {
            if (r_norm > 10.0 * s_norm && mu < 1e6) {
                mu *= 2.0;
                u /= 2.0;
            } else if (s_norm > 10.0 * r_norm && mu > 1e-6) {
                mu /= 2.0;
                u *= 2.0;
            }
        }
    }

    res.x_hat = x * scale;
    res.residual = (A_ * res.x_hat - y).norm();
    res.objective = group_objective(res.x_hat, bs_);
    res.iterations = std::min(it, opts_.max_iter);
    res.converged = converged;
    return res;
}

RecoveryResult solve_group_bp(const RecoveryProblem& prob,
                              const RecoveryOptions& opts) {
    GroupBpSolver solver(prob.A, prob.bs, opts);
    return solver.solve(prob.y, prob.eta);
}

RecoveryResult solve_l1(const RecoveryProblem& prob,
                        const RecoveryOptions& opts) {
    GroupBpSolver solver(prob.A,
                         make_block_structure(static_cast<int>(prob.A.cols()),
                                              static_cast<int>(prob.A.cols())),
                         opts);
    return solver.solve(prob.y, prob.eta);
}

bool is_success(const CVector& x_hat, const CVector& x_true, double tol_rel) {
    if (x_hat.size() != x_true.size())
        throw InvalidArgument("length mismatch between estimate and ground truth");
    const double nt = x_true.norm();
    if (nt == 0.0) throw InvalidArgument("ground truth must be nonzero");
    return (x_hat - x_true).norm() / nt <= tol_rel;
}

} // namespace capmax
