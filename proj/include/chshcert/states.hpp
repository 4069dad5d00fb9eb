#pragma once

#include "chshcert/complex_matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace chshcert {

// Basis levels and subsystem labels are 1-based throughout, matching the
// |1>, |2>, ... convention used in file formats and reports.

struct AmplitudeTerm {
    std::vector<int> idx;  // one 1-based level per subsystem
    cplx amp;
};

// Normalized pure state with finite support on a truncated product space.
class PureState {
public:
    PureState(std::vector<int> dims, std::vector<AmplitudeTerm> terms);

    const std::vector<int>& dims() const noexcept { return dims_; }
    const std::vector<AmplitudeTerm>& terms() const noexcept { return terms_; }
    int subsystems() const noexcept { return static_cast<int>(dims_.size()); }

    std::size_t space_side() const noexcept;
    std::size_t flat_index(const std::vector<int>& idx) const;

    // Dense amplitude vector in row-major basis order.
    std::vector<cplx> dense() const;

private:
    std::vector<int> dims_;
    std::vector<AmplitudeTerm> terms_;  // sorted by idx, nonzero, unit norm
};

class DensityOperator {
public:
    DensityOperator(std::vector<int> dims, ComplexMatrix matrix);

    const std::vector<int>& dims() const noexcept { return dims_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    ComplexMatrix& matrix() noexcept { return matrix_; }
    int subsystems() const noexcept { return static_cast<int>(dims_.size()); }
    std::size_t side() const noexcept { return matrix_.rows(); }

    // Hermitian within 1e-10, trace 1 within 1e-10, min eigenvalue >= -1e-9.
    void validate() const;

private:
    std::vector<int> dims_;
    ComplexMatrix matrix_;
};

// Split of subsystems {1..m} into two non-empty groups; canonical form puts
// subsystem 1 on the left.
struct Bipartition {
    std::vector<int> left;
    std::vector<int> right;

    Bipartition(std::vector<int> left_in, std::vector<int> right_in);

    static Bipartition from_left(const std::vector<int>& left, int m);
};

// All canonical bipartitions of m subsystems, ordered by left-subset
// bitmask; there are 2^(m-1) - 1 of them.
std::vector<Bipartition> all_bipartitions(int m);

PureState make_pure(std::vector<int> dims, std::vector<AmplitudeTerm> raw);

DensityOperator to_density(const PureState& psi);

// Haar-distributed state on the full truncated space: i.i.d. standard
// complex Gaussian amplitudes, normalized. Deterministic per seed.
PureState random_pure(const std::vector<int>& dims, std::uint64_t seed);

// Tensor product of independent Haar-random single-subsystem states.
PureState random_product(const std::vector<int>& dims, std::uint64_t seed);

DensityOperator mix(const std::vector<std::pair<double, DensityOperator>>& components);

DensityOperator reduced(const PureState& psi, const Bipartition& p, Side side);

// Reshapes an m-partite state into the bipartite state of decomposition p.
// Composite levels flatten the grouped subsystems row-major in ascending
// subsystem order.
PureState regroup_pure(const PureState& psi, const Bipartition& p);
DensityOperator regroup_density(const DensityOperator& rho, const Bipartition& p);

// --- state file format (JSON) ---

struct LoadedState {
    bool is_pure;
    std::vector<int> dims;
    // exactly one of the two is meaningful
    std::vector<AmplitudeTerm> terms;
    ComplexMatrix matrix;

    PureState as_pure() const;
    DensityOperator as_density() const;
};

LoadedState parse_state_json(const std::string& text);
LoadedState load_state_file(const std::string& path);

std::string serialize_state(const PureState& psi);
std::string serialize_state(const DensityOperator& rho);

} // namespace chshcert
