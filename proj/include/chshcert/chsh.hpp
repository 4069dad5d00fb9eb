#pragma once

#include "chshcert/pair_ops.hpp"

#include <array>

namespace chshcert {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
double vec_norm(const Vec3& a);

// Four Bloch vectors defining a CHSH configuration. Construction
// renormalizes vectors whose norm is within 1e-6 of 1 and rejects the rest.
struct MeasurementSettings {
    Vec3 a1{0, 0, 1};
    Vec3 a2{1, 0, 0};
    Vec3 b1{0, 0, 1};
    Vec3 b2{1, 0, 0};

    MeasurementSettings() = default;
    MeasurementSettings(Vec3 a1_in, Vec3 a2_in, Vec3 b1_in, Vec3 b2_in);
};

struct ChshOperator {
    PairIndex alpha;
    PairIndex beta;
    std::optional<Bipartition> bipartition;
    MeasurementSettings settings;
    std::vector<int> dims;  // bipartite (regrouped) truncation levels
    ComplexMatrix matrix;   // on the full (regrouped) truncated space
};

struct Witness {
    ComplexMatrix matrix;  // 2I - B
    ChshOperator source;
    bool nontrivial = false;  // some eigenvalue of W is negative
};

// Windowed observable: zero except the (i, j) window, which carries the
// Pauli form of the Bloch vector: (i,i)=a_z, (i,j)=a_x - i a_y,
// (j,i)=a_x + i a_y, (j,j)=-a_z.
ComplexMatrix make_A(const Vec3& setting, const PairIndex& pair, int dim);

// L A L^dagger. On the window this flips the Bloch vector to
// (-a_x, a_y, -a_z).
ComplexMatrix conjugate_by_L(const ComplexMatrix& a, const PairIndex& pair);

// Sum of the four conjugated tensor terms with signs (+, +, +, -).
ChshOperator make_chsh(const PairIndex& alpha, const PairIndex& beta,
                       const MeasurementSettings& settings, const std::vector<int>& dims);

// Multipartite form: regroups dims by p and builds the bipartite operator
// on the composite levels. Evaluate it against regroup_density(rho, p).
ChshOperator make_chsh_bipartition(const Bipartition& p, const PairIndex& alpha,
                                   const PairIndex& beta, const MeasurementSettings& settings,
                                   const std::vector<int>& dims);

// Tr(B rho) on the full space; the imaginary residue must be below 1e-10
// and is discarded.
double expectation_raw(const ChshOperator& b, const DensityOperator& rho);

// Standard two-qubit CHSH operator from the raw settings, on the 4x4
// block basis.
ComplexMatrix two_qubit_chsh(const MeasurementSettings& settings);

double expectation_block(const MeasurementSettings& settings, const BlockState& block);

Witness make_witness(const ChshOperator& b);

} // namespace chshcert
