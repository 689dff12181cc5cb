#include "capmax/capacity.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "capmax/errors.hpp"
#include "capmax/parallel.hpp"

namespace capmax {

namespace {

/// Gather the Gram submatrix G(full)[s, s] + beta I.
CMatrix gather_gram(const CMatrix& gram_full, const std::vector<int>& s,
                    double beta) {
    const auto n = static_cast<Eigen::Index>(s.size());
    CMatrix G(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            G(i, j) = gram_full(s[static_cast<std::size_t>(i)],
                                s[static_cast<std::size_t>(j)]);
    G.diagonal().array() += beta;
    return G;
}

std::uint64_t binomial_capped(int n, int t, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (int i = 1; i <= t; ++i) {
        r = r * static_cast<std::uint64_t>(n - t + i) / static_cast<std::uint64_t>(i);
        if (r > 4 * cap) return r; // early out, avoids overflow for sane inputs
    }
    return r;
}

} // namespace

double logdet_hermitian_pd(const CMatrix& G) {
    Eigen::LDLT<CMatrix> ldlt(G);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("LDL^H factorization failed; matrix is not positive definite");
    double acc = 0.0;
    const auto d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double di = d[i].real();
        if (!(di > 0.0))
            throw NumericalError("matrix is not positive definite (pivot " +
                                 std::to_string(di) + ")");
        acc += std::log(di);
    }
    return acc;
}

double pair_capacity(const CMatrix& A_sub, double beta) {
    if (beta < 0.0) throw InvalidArgument("beta must be nonnegative");
    if (A_sub.cols() > A_sub.rows())
        std::cerr << "capmax: warning: submatrix has more columns (" << A_sub.cols()
                  << ") than rows (" << A_sub.rows()
                  << "); its Gram matrix is rank deficient\n";
    CMatrix G = A_sub.adjoint() * A_sub;
    G.diagonal().array() += beta;
    return logdet_hermitian_pd(G);
}

CapacityReport capacity_report(const CMatrix& A, const BlockStructure& bs,
                               double beta) {
    if (beta < 0.0) throw InvalidArgument("beta must be nonnegative");
    if (A.cols() != bs.N)
        throw InvalidArgument("matrix has " + std::to_string(A.cols()) +
                              " columns, block structure expects " +
                              std::to_string(bs.N));
    double worst = 0.0;
    for (Eigen::Index n = 0; n < A.cols(); ++n)
        worst = std::max(worst, std::abs(A.col(n).norm() - 1.0));
    if (worst > 1e-9)
        std::cerr << "capmax: warning: columns deviate from unit norm by " << worst
                  << "; capacities are only meaningful for normalized columns\n";
    if (2 * bs.L > static_cast<int>(A.rows()))
        std::cerr << "capmax: warning: pair supports are wider (2L = " << 2 * bs.L
                  << ") than the measurement count M = " << A.rows() << "\n";

    const auto pairs = pair_supports(bs);
    const CMatrix gram_full = A.adjoint() * A;

    CapacityReport rep;
    rep.beta = beta;
    rep.per_pair.resize(static_cast<Eigen::Index>(pairs.size()));
    std::vector<std::string> errors(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t r) {
        try {
            rep.per_pair[static_cast<Eigen::Index>(r)] =
                logdet_hermitian_pd(gather_gram(gram_full, pairs[r].columns, beta));
        } catch (const NumericalError& e) {
            errors[r] = e.what();
        }
    });
    for (std::size_t r = 0; r < pairs.size(); ++r)
        if (!errors[r].empty())
            throw NumericalError("pair " + std::to_string(r) + ": " + errors[r]);

    rep.argmin_pair = 0;
    rep.min_capacity = rep.per_pair[0];
    for (Eigen::Index r = 1; r < rep.per_pair.size(); ++r) {
        if (rep.per_pair[r] < rep.min_capacity) {
            rep.min_capacity = rep.per_pair[r];
            rep.argmin_pair = static_cast<int>(r);
        }
    }
    return rep;
}

BlockRicResult block_ric(const CMatrix& A, const BlockStructure& bs, int T,
                         const RicOptions& opts) {
    if (T < 1 || T > bs.K)
        throw InvalidArgument("block sparsity T must lie in [1, K]");
    if (A.cols() != bs.N)
        throw InvalidArgument("matrix/block-structure column mismatch");
    const std::uint64_t count = binomial_capped(bs.K, T, opts.enumeration_cap);
    if (count > opts.enumeration_cap)
        throw InvalidArgument("(K choose T) = " + std::to_string(count) +
                              " exceeds the enumeration cap " +
                              std::to_string(opts.enumeration_cap));

    // All supports, lexicographic.
    std::vector<int> combos;
    combos.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(T));
    std::vector<int> cur(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i) cur[static_cast<std::size_t>(i)] = i;
    for (;;) {
        combos.insert(combos.end(), cur.begin(), cur.end());
        int i = T - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == bs.K - T + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < T; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    const std::size_t n_supports = combos.size() / static_cast<std::size_t>(T);

    const CMatrix gram_full = A.adjoint() * A;
    std::vector<double> lo(n_supports), hi(n_supports);
    parallel_for(
        n_supports,
        [&](std::size_t s) {
            std::vector<int> cols;
            cols.reserve(static_cast<std::size_t>(bs.L * T));
            for (int t = 0; t < T; ++t) {
                const int k = combos[s * static_cast<std::size_t>(T) +
                                     static_cast<std::size_t>(t)];
                const auto& bk = bs.block_indices[static_cast<std::size_t>(k)];
                cols.insert(cols.end(), bk.begin(), bk.end());
            }
            const CMatrix G = gather_gram(gram_full, cols, 0.0);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(G, Eigen::EigenvaluesOnly);
            lo[s] = es.eigenvalues()(0);
            hi[s] = es.eigenvalues()(G.rows() - 1);
        },
        opts.threads);

    BlockRicResult res;
    res.T = T;
    std::size_t arg_lo = 0, arg_hi = 0;
    res.lambda_min = lo[0];
    res.lambda_max = hi[0];
    for (std::size_t s = 1; s < n_supports; ++s) {
        if (lo[s] < res.lambda_min) {
            res.lambda_min = lo[s];
            arg_lo = s;
        }
        if (hi[s] > res.lambda_max) {
            res.lambda_max = hi[s];
            arg_hi = s;
        }
    }
    res.delta = std::max(1.0 - res.lambda_min, res.lambda_max - 1.0);
    res.support_lo.assign(combos.begin() + static_cast<std::ptrdiff_t>(arg_lo * T),
                          combos.begin() + static_cast<std::ptrdiff_t>((arg_lo + 1) * T));
    res.support_hi.assign(combos.begin() + static_cast<std::ptrdiff_t>(arg_hi * T),
                          combos.begin() + static_cast<std::ptrdiff_t>((arg_hi + 1) * T));
    return res;
}

double capacity_ric_bound(double delta, int L, int T, double beta) {
    if (delta < 0.0) throw InvalidArgument("delta must be nonnegative");
    if (delta >= 1.0 || 1.0 - delta + beta <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 0.5 * static_cast<double>(L) * static_cast<double>(T) *
           std::log(1.0 - delta + beta);
}

} // namespace capmax
