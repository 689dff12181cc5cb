#include "capmax/blocks.hpp"

#include <algorithm>
#include <string>

#include "capmax/errors.hpp"

namespace capmax {

BlockStructure make_block_structure(int N, int K) {
    if (N <= 0 || K <= 0)
        throw InvalidArgument("block structure requires N > 0 and K > 0");
    if (N % K != 0)
        throw InvalidArgument("N = " + std::to_string(N) +
                              " is not divisible by K = " + std::to_string(K));
    BlockStructure bs;
    bs.N = N;
    bs.K = K;
    bs.L = N / K;
    bs.block_indices.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        auto& list = bs.block_indices[static_cast<std::size_t>(k)];
        list.resize(static_cast<std::size_t>(bs.L));
        for (int i = 0; i < bs.L; ++i) list[static_cast<std::size_t>(i)] = k * bs.L + i;
    }
    return bs;
}

BlockStructure make_block_structure(int N, std::vector<std::vector<int>> lists) {
    if (N <= 0 || lists.empty())
        throw InvalidArgument("block structure requires N > 0 and at least one block");
    const int K = static_cast<int>(lists.size());
    if (N % K != 0)
        throw InvalidArgument("N = " + std::to_string(N) +
                              " is not divisible by K = " + std::to_string(K));
    const int L = N / K;

    std::vector<char> seen(static_cast<std::size_t>(N), 0);
    for (const auto& list : lists) {
        if (static_cast<int>(list.size()) != L)
            throw InvalidArgument("every block must have length L = N/K = " +
                                  std::to_string(L));
        int prev = -1;
        for (int idx : list) {
            if (idx < 0 || idx >= N)
                throw InvalidArgument("block index " + std::to_string(idx) +
                                      " out of range [0, " + std::to_string(N) + ")");
            if (idx <= prev)
                throw InvalidArgument("block index lists must be strictly increasing");
            if (seen[static_cast<std::size_t>(idx)])
                throw InvalidArgument("block index " + std::to_string(idx) +
                                      " appears in more than one block");
            seen[static_cast<std::size_t>(idx)] = 1;
            prev = idx;
        }
    }
    // Disjoint lists of total length N inside [0,N) necessarily cover it.

    BlockStructure bs;
    bs.N = N;
    bs.K = K;
    bs.L = L;
    bs.block_indices = std::move(lists);
    return bs;
}

std::vector<PairSupport> pair_supports(const BlockStructure& bs) {
    std::vector<PairSupport> pairs;
    pairs.reserve(static_cast<std::size_t>(bs.K) * (bs.K - 1) / 2);
    int id = 0;
    for (int k = 0; k < bs.K; ++k) {
        for (int j = k + 1; j < bs.K; ++j) {
            PairSupport ps;
            ps.pair_id = id++;
            ps.block_k = k;
            ps.block_j = j;
            ps.columns = bs.block_indices[static_cast<std::size_t>(k)];
            const auto& bj = bs.block_indices[static_cast<std::size_t>(j)];
            ps.columns.insert(ps.columns.end(), bj.begin(), bj.end());
            pairs.push_back(std::move(ps));
        }
    }
    return pairs;
}

CMatrix extract_columns(const CMatrix& A, const std::vector<int>& support) {
    CMatrix out(A.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) {
        const int c = support[j];
        if (c < 0 || c >= A.cols())
            throw InvalidArgument("column index " + std::to_string(c) +
                                  " out of range for " + std::to_string(A.cols()) +
                                  " columns");
        out.col(static_cast<Eigen::Index>(j)) = A.col(c);
    }
    return out;
}

CMatrix extract_columns(const CMatrix& A, const PairSupport& support) {
    return extract_columns(A, support.columns);
}

} // namespace capmax
