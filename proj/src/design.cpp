#include "capmax/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "capmax/parallel.hpp"

namespace capmax {

namespace {

/// A^H * A with the output columns computed in parallel chunks.
CMatrix herm_gram(const CMatrix& A, int threads) {
    const Eigen::Index N = A.cols();
    CMatrix G(N, N);
    const Eigen::Index chunk = std::max<Eigen::Index>(32, N / 16);
    const std::size_t n_chunks = static_cast<std::size_t>((N + chunk - 1) / chunk);
    parallel_for(
        n_chunks,
        [&](std::size_t ci) {
            const Eigen::Index c0 = static_cast<Eigen::Index>(ci) * chunk;
            const Eigen::Index w = std::min(chunk, N - c0);
            G.middleCols(c0, w).noalias() = A.adjoint() * A.middleCols(c0, w);
        },
        threads);
    return G;
}

/// Shared per-p evaluation: assembled matrix, full Gram, per-pair log-dets.
struct PairEval {
    CMatrix A;
    CMatrix gram;
    RVector d;
};

PairEval eval_pairs(const SensingModel& model,
                    const std::vector<PairSupport>& pairs, const RVector& p,
                    double beta, int threads) {
    PairEval ev;
    ev.A = model.assemble(p);
    ev.gram = herm_gram(ev.A, threads);
    ev.d.resize(static_cast<Eigen::Index>(pairs.size()));
    std::vector<std::string> errors(pairs.size());
    parallel_for(
        pairs.size(),
        [&](std::size_t r) {
            const auto& cols = pairs[r].columns;
            const auto n = static_cast<Eigen::Index>(cols.size());
            CMatrix G(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < n; ++i)
                    G(i, j) = ev.gram(cols[static_cast<std::size_t>(i)],
                                      cols[static_cast<std::size_t>(j)]);
            G.diagonal().array() += beta;
            try {
                ev.d[static_cast<Eigen::Index>(r)] = logdet_hermitian_pd(G);
            } catch (const NumericalError& e) {
                errors[r] = e.what();
            }
        },
        threads);
    for (std::size_t r = 0; r < pairs.size(); ++r)
        if (!errors[r].empty())
            throw NumericalError("pair " + std::to_string(r) + ": " + errors[r]);
    return ev;
}

/// Gradient of sum_r w_r * d_r(p) at an evaluated point, via the adjoint
/// identity d(log det)/dp_j = 2 Re tr[(G_r + beta I)^{-1} A_r^H dA_r/dp_j]:
/// accumulate W = A * S with S = sum_r w_r scatter((G_r + beta I)^{-1}) and
/// fold W against the model partials in one pass.
RVector weighted_grad(const SensingModel& model,
                      const std::vector<PairSupport>& pairs, const RVector& p,
                      const PairEval& ev, const RVector& w, double beta,
                      int threads) {
    const Eigen::Index N = ev.A.cols();
    std::vector<CMatrix> inv(pairs.size());
    std::vector<std::string> errors(pairs.size());
    parallel_for(
        pairs.size(),
        [&](std::size_t r) {
            const auto& cols = pairs[r].columns;
            const auto n = static_cast<Eigen::Index>(cols.size());
            CMatrix G(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < n; ++i)
                    G(i, j) = ev.gram(cols[static_cast<std::size_t>(i)],
                                      cols[static_cast<std::size_t>(j)]);
            G.diagonal().array() += beta;
            Eigen::LDLT<CMatrix> ldlt(G);
            if (ldlt.info() != Eigen::Success) {
                errors[r] = "LDL^H factorization failed";
                return;
            }
            inv[r] = ldlt.solve(CMatrix::Identity(n, n));
        },
        threads);
    for (std::size_t r = 0; r < pairs.size(); ++r)
        if (!errors[r].empty())
            throw NumericalError("pair " + std::to_string(r) + ": " + errors[r]);

    CMatrix S = CMatrix::Zero(N, N);
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const double wr = w[static_cast<Eigen::Index>(r)];
        if (wr == 0.0) continue;
        const auto& cols = pairs[r].columns;
        const auto n = static_cast<Eigen::Index>(cols.size());
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                S(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]) +=
                    wr * inv[r](i, j);
    }

    CMatrix W(ev.A.rows(), N);
    const Eigen::Index chunk = std::max<Eigen::Index>(32, N / 16);
    const std::size_t n_chunks = static_cast<std::size_t>((N + chunk - 1) / chunk);
    parallel_for(
        n_chunks,
        [&](std::size_t ci) {
            const Eigen::Index c0 = static_cast<Eigen::Index>(ci) * chunk;
            const Eigen::Index width = std::min(chunk, N - c0);
            W.middleCols(c0, width).noalias() = ev.A * S.middleCols(c0, width);
        },
        threads);
    return model.gradient_adjoint(p, ev.A, W);
}

double smooth_value(const DesignState& st, const RVector& d) {
    const RVector res = st.c - d + st.gamma / st.rho;
    return 0.5 * st.rho * res.squaredNorm();
}

RVector residual_weights(const DesignState& st, const RVector& d) {
    return -st.rho * (st.c - d + st.gamma / st.rho);
}

struct LineSearchResult {
    RVector p;
    PairEval ev;
    double smooth = 0.0;
    double step = 0.0;
    bool accepted = false;
};

/// Armijo backtracking on the smooth penalty term with box projection.
LineSearchResult line_search(const SensingModel& model,
                             const std::vector<PairSupport>& pairs,
                             const DesignState& st, const RVector& g,
                             double h0, double t0, const DesignOptions& opts) {
    LineSearchResult out;
    double t = std::clamp(t0, opts.bb_min, opts.bb_max);
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
        RVector cand = model.project_feasible(st.p - t * g);
        const RVector dp = cand - st.p;
        const double slope = g.dot(dp);
        if (dp.lpNorm<Eigen::Infinity>() == 0.0) return out; // stationary
        PairEval ev = eval_pairs(model, pairs, cand, opts.beta, opts.threads);
        const double h = smooth_value(st, ev.d);
        if (std::isfinite(h) && h <= h0 + opts.armijo_c1 * slope && h < h0) {
            out.p = std::move(cand);
            out.ev = std::move(ev);
            out.smooth = h;
            out.step = t;
            out.accepted = true;
            return out;
        }
        t *= opts.armijo_factor;
        if (t < opts.min_step) break;
    }
    return out;
}

} // namespace

RVector project_l1_ball(const RVector& v, double radius) {
    if (radius <= 0.0) throw InvalidArgument("radius must be positive");
    const double l1 = v.lpNorm<1>();
    if (l1 <= radius) return v;

    RVector u = v.cwiseAbs();
    std::sort(u.data(), u.data() + u.size(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        cum += u[k];
        const double cand = (cum - radius) / static_cast<double>(k + 1);
        if (u[k] - cand > 0.0)
            theta = cand;
        else
            break;
    }
    RVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::max(std::abs(v[i]) - theta, 0.0);
        out[i] = std::copysign(mag, v[i]);
    }
    return out;
}

RVector prox_linf(const RVector& v, double lambda) {
    if (lambda <= 0.0) throw InvalidArgument("lambda must be positive");
    return v - lambda * project_l1_ball(v / lambda, 1.0);
}

double auglag_value(const SensingModel& model, const BlockStructure& bs,
                    const DesignState& state, double beta) {
    const auto pairs = pair_supports(bs);
    const PairEval ev = eval_pairs(model, pairs, state.p, beta, 0);
    return state.c.lpNorm<Eigen::Infinity>() + smooth_value(state, ev.d);
}

RVector grad_p(const SensingModel& model, const BlockStructure& bs,
               const DesignState& state, double beta) {
    const auto pairs = pair_supports(bs);
    const PairEval ev = eval_pairs(model, pairs, state.p, beta, 0);
    return weighted_grad(model, pairs, state.p, ev, residual_weights(state, ev.d),
                         beta, 0);
}

RVector update_c(const DesignState& state, const RVector& d) {
    if (state.rho <= 0.0) throw InvalidArgument("rho must be positive");
    return prox_linf(d - state.gamma / state.rho, 1.0 / state.rho);
}

RVector update_p(const SensingModel& model, const BlockStructure& bs,
                 const DesignState& state, const DesignOptions& opts) {
    const auto pairs = pair_supports(bs);
    const PairEval ev = eval_pairs(model, pairs, state.p, opts.beta, opts.threads);
    const RVector g = weighted_grad(model, pairs, state.p, ev,
                                    residual_weights(state, ev.d), opts.beta,
                                    opts.threads);
    if (g.lpNorm<Eigen::Infinity>() == 0.0) return state.p;
    const double h0 = smooth_value(state, ev.d);
    auto ls = line_search(model, pairs, state, g, h0, 1.0, opts);
    if (!ls.accepted) {
        if ((state.p - model.project_feasible(state.p - g)).lpNorm<Eigen::Infinity>() ==
            0.0)
            return state.p; // projected-stationary point
        throw LineSearchStall("no decrease found in " +
                              std::to_string(opts.max_backtracks) + " backtracks");
    }
    return ls.p;
}

RVector update_multipliers(const DesignState& state, const RVector& d) {
    return state.gamma + state.rho * (state.c - d);
}

DesignResult design(const SensingModel& model, const BlockStructure& bs,
                    const RVector& p0, const DesignOptions& opts) {
    if (bs.N != model.cols())
        throw InvalidArgument("block structure does not match model columns");
    if (opts.rho0 <= 0.0 || opts.rho_growth <= 1.0 || opts.tol_c <= 0.0 ||
        opts.tol_f <= 0.0 || opts.max_outer < 1 || opts.max_inner < 1)
        throw InvalidArgument("invalid design options");
    const auto pairs = pair_supports(bs);
    const auto R = static_cast<Eigen::Index>(pairs.size());

    DesignState st;
    st.p = model.project_feasible(p0);
    st.rho = opts.rho0;
    st.gamma = RVector::Zero(R);
    PairEval ev = eval_pairs(model, pairs, st.p, opts.beta, opts.threads);
    st.c = ev.d;

    DesignResult result;
    double prev_obj = ev.d.minCoeff();
    double prev_violation = std::numeric_limits<double>::infinity();
    RVector best_p = st.p;
    double best_obj = prev_obj;

    for (int outer = 1; outer <= opts.max_outer; ++outer) {
        st.outer_iter = outer;
        const double inner_tol =
            std::max(opts.inner_grad_tol, opts.inner_tol_scale / st.rho);

        // Inner alternating minimization: exact prox in c, one line-searched
        // projected-gradient step in p per sweep.
        int inner_iters = 0;
        bool have_bb = false;
        RVector prev_p, prev_g;
        double t_bb = 1.0;
        for (int it = 0; it < opts.max_inner; ++it) {
            st.c = update_c(st, ev.d);
            const RVector g = weighted_grad(model, pairs, st.p, ev,
                                            residual_weights(st, ev.d), opts.beta,
                                            opts.threads);
            if (!g.allFinite()) throw NumericalError("non-finite gradient");
            const double gm =
                (st.p - model.project_feasible(st.p - g)).norm();
            if (gm <= inner_tol) break;

            if (have_bb) {
                const RVector dp = st.p - prev_p;
                const RVector dg = g - prev_g;
                const double denom = dp.dot(dg);
                if (denom > 0.0)
                    t_bb = std::clamp(dp.squaredNorm() / denom, opts.bb_min,
                                      opts.bb_max);
                else
                    t_bb = std::min(t_bb * 2.0, opts.bb_max);
            }
            prev_p = st.p;
            prev_g = g;
            have_bb = true;

            const double h0 = smooth_value(st, ev.d);
            auto ls = line_search(model, pairs, st, g, h0, t_bb, opts);
            ++inner_iters;
            if (!ls.accepted) break; // stall: let the outer loop raise rho
            st.p = std::move(ls.p);
            ev = std::move(ls.ev);
            t_bb = ls.step;
        }

        st.gamma = update_multipliers(st, ev.d);
        const double violation = (st.c - ev.d).lpNorm<Eigen::Infinity>();
        const double obj = ev.d.minCoeff();
        if (!std::isfinite(obj)) throw NumericalError("non-finite objective");

        OuterTraceRow row;
        row.iter = outer;
        row.min_capacity = obj;
        row.violation = violation;
        row.rho = st.rho;
        row.auglag = st.c.lpNorm<Eigen::Infinity>() + smooth_value(st, ev.d);
        row.inner_iters = inner_iters;
        result.trace.push_back(row);

        if (obj > best_obj) {
            best_obj = obj;
            best_p = st.p;
        }

        if (violation <= opts.tol_c && std::abs(obj - prev_obj) <= opts.tol_f) {
            result.termination = "converged";
            result.final_violation = violation;
            result.p_final = st.p;
            result.report = capacity_report(model.assemble(st.p), bs, opts.beta);
            return result;
        }

        if (violation > opts.violation_shrink * prev_violation)
            st.rho *= opts.rho_growth;
        prev_violation = violation;
        prev_obj = obj;
    }

    result.termination = "max_iter";
    result.final_violation = result.trace.empty()
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : result.trace.back().violation;
    result.p_final = best_p;
    result.report = capacity_report(model.assemble(best_p), bs, opts.beta);
    return result;
}

} // namespace capmax
