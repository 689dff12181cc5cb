#ifndef CAPMAX_CAPACITY_HPP
#define CAPMAX_CAPACITY_HPP

#include <cstdint>
#include <vector>

#include "capmax/blocks.hpp"
#include "capmax/types.hpp"

namespace capmax {

/// Per-pair capacities of a fixed matrix, natural-log units.
struct CapacityReport {
    RVector per_pair;
    double min_capacity = 0.0;
    int argmin_pair = -1;
    double beta = 0.0;
};

/// Exhaustive block restricted-isometry evaluation at block sparsity T.
struct BlockRicResult {
    double delta = 0.0;
    int T = 0;
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    /// Block-id lists achieving the extreme Gram eigenvalues.
    std::vector<int> support_lo;
    std::vector<int> support_hi;
};

struct RicOptions {
    std::uint64_t enumeration_cap = 1000000;
    int threads = 0;
};

/// log det(G) for Hermitian positive-definite G, via a pivoted LDL^H
/// factorization (sum of log pivots). Throws NumericalError when G is not
/// positive definite.
double logdet_hermitian_pd(const CMatrix& G);

/// Capacity of one submatrix: log det(A_sub^H A_sub + beta I).
double pair_capacity(const CMatrix& A_sub, double beta);

/// Capacity of every block pair plus the minimum. Warns (stderr) when the
/// columns of A are not unit-norm to 1e-9, since the capacity objective is
/// only meaningful for normalized columns.
CapacityReport capacity_report(const CMatrix& A, const BlockStructure& bs,
                               double beta);

/// Exact block restricted-isometry constant delta_{L,T} by enumerating all
/// (K choose T) supports. Throws when the enumeration cap is exceeded.
BlockRicResult block_ric(const CMatrix& A, const BlockStructure& bs, int T,
                         const RicOptions& opts = {});

/// Lower bound on the capacity of any T-block submatrix of a matrix with
/// normalized columns and block RIC delta: (L*T/2) * log(1 - delta + beta).
/// Returns -infinity when delta >= 1 (vacuous).
double capacity_ric_bound(double delta, int L, int T, double beta = 0.0);

} // namespace capmax

#endif
