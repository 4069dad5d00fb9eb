#pragma once

#include "chshcert/chsh.hpp"

namespace chshcert {

// Boolean entanglement decisions use this threshold; an order of magnitude
// above accumulated rounding at the supported truncations.
inline constexpr double kEntangledThreshold = 1e-7;

enum class ConcurrenceMethod { reduced_purity, determinant_sum, block_decomposition, multipartite };

struct BlockContribution {
    std::optional<Bipartition> bipartition;
    PairIndex alpha;
    PairIndex beta;
    double weight = 0.0;
    double block_concurrence = 0.0;  // of the normalized block
};

struct ConcurrenceReport {
    double value = 0.0;   // weighted block sum (the identity that holds)
    double unweighted_value = 0.0;  // literal sum of normalized block concurrences
    double det_value = 0.0;         // determinant-form cross check
    ConcurrenceMethod method = ConcurrenceMethod::block_decomposition;
    std::vector<BlockContribution> contributions;
};

// sqrt(2 (1 - Tr rho_A^2)) for bipartite pure states.
double concurrence_pure(const PureState& psi);

// sqrt of the sum over all ordered index quadruples of
// |a_ik a_jl - a_il a_jk|^2; equals concurrence_pure.
double concurrence_dets(const PureState& psi);

// Per-block decomposition: value = sqrt(sum (w_ab * C(block))^2).
ConcurrenceReport concurrence_blocks(const PureState& psi);

// Multipartite concurrence over all canonical bipartitions (m >= 3); the
// report's det_value carries the determinant form, value the weighted
// block form. The two agree to rounding.
ConcurrenceReport concurrence_multipartite(const PureState& psi);

// Wootters concurrence of a two-qubit density matrix:
// max(0, l1 - l2 - l3 - l4), the l's being the descending square roots of
// the eigenvalues of rho (sy x sy) rho* (sy x sy).
double wootters(const ComplexMatrix& rho2q);

struct ChshOptimum {
    double value = 0.0;
    MeasurementSettings settings;
};

// Closed-form maximum of the CHSH expectation over measurement settings for
// a two-qubit state: 2 sqrt(t1 + t2) from the top two eigenvalues of T^T T,
// T being the Pauli correlation matrix. The returned settings realize the
// value through expectation_block.
ChshOptimum horodecki_max(const ComplexMatrix& rho2q);

} // namespace chshcert
