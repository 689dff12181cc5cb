#ifndef CAPMAX_BLOCKS_HPP
#define CAPMAX_BLOCKS_HPP

#include <vector>

#include "capmax/types.hpp"

namespace capmax {

/// Partition of the N signal indices into K disjoint blocks of length L.
/// Immutable after construction; safe to share across threads.
struct BlockStructure {
    int N = 0;
    int K = 0;
    int L = 0;
    /// K strictly increasing index lists, each of length L, jointly
    /// covering {0,...,N-1}.
    std::vector<std::vector<int>> block_indices;
};

/// Column support of one block pair (k, j), k < j: the M x 2L submatrix
/// the capacity objective is evaluated on.
struct PairSupport {
    int pair_id = 0;
    int block_k = 0;
    int block_j = 0;
    /// block_indices[k] ++ block_indices[j]; length 2L.
    std::vector<int> columns;
};

/// Contiguous layout: block k owns [k*L, (k+1)*L). Throws InvalidArgument
/// if N is not divisible by K.
BlockStructure make_block_structure(int N, int K);

/// Explicit layout. Lists must be strictly increasing, disjoint, equal
/// length, and cover {0,...,N-1}.
BlockStructure make_block_structure(int N, std::vector<std::vector<int>> lists);

/// All R = K(K-1)/2 pair supports in lexicographic (k, j) order.
std::vector<PairSupport> pair_supports(const BlockStructure& bs);

/// Column gather: output column j equals A column support[j].
CMatrix extract_columns(const CMatrix& A, const std::vector<int>& support);
CMatrix extract_columns(const CMatrix& A, const PairSupport& support);

} // namespace capmax

#endif
