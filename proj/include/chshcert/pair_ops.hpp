#pragma once

#include "chshcert/states.hpp"

#include <optional>
#include <vector>

namespace chshcert {

// Linear enumeration of 2-level windows (i, j), i < j, by triangular count:
// (1,2) -> 1, (1,3) -> 2, (2,3) -> 3, (1,4) -> 4, ...
struct PairIndex {
    int i = 0;
    int j = 0;
    int alpha = 0;

    PairIndex() = default;
    PairIndex(int i_in, int j_in);

    static PairIndex from_alpha(int alpha);

    bool operator==(const PairIndex& o) const { return i == o.i && j == o.j; }
    bool operator<(const PairIndex& o) const { return alpha < o.alpha; }
};

int pair_to_linear(int i, int j);
PairIndex linear_to_pair(int alpha);

// L = |i><j| - |j><i| on a space of the given truncation.
ComplexMatrix make_L(const PairIndex& pair, int dim);

// P = |i><i| + |j><j|, the projector onto the window; P = L L^dagger.
ComplexMatrix make_P(const PairIndex& pair, int dim);

// Normalized two-qubit state carved out of a bigger state by conjugating
// with L_alpha (x) L_beta and compressing onto the window, in basis order
// (ik, il, jk, jl). weight is the trace norm of the unnormalized operator.
struct BlockState {
    ComplexMatrix matrix;  // 4x4
    double weight = 0.0;
    PairIndex alpha;
    PairIndex beta;
    std::optional<Bipartition> bipartition;
};

// Blocks below this weight are singular to normalize and reported absent.
inline constexpr double kWeightCutoff = 1e-14;

std::optional<BlockState> project_block(const DensityOperator& rho,
                                        const PairIndex& alpha, const PairIndex& beta);

// Same, after regrouping the state into the bipartite decomposition p;
// alpha and beta index composite levels of the grouped sides.
std::optional<BlockState> project_block_bipartition(const DensityOperator& rho,
                                                    const Bipartition& p,
                                                    const PairIndex& alpha,
                                                    const PairIndex& beta);

// Window-amplitude route for pure states; avoids the full density matrix.
std::optional<BlockState> project_block_pure(const PureState& psi,
                                             const PairIndex& alpha, const PairIndex& beta);

// All (alpha, beta) whose windows intersect the occupied levels on both
// sides, in ascending (alpha, beta) order. Superset of blocks with
// weight > 0.
std::vector<std::pair<PairIndex, PairIndex>> enumerate_blocks(const DensityOperator& rho);
std::vector<std::pair<PairIndex, PairIndex>> enumerate_blocks(const PureState& psi);

} // namespace chshcert
