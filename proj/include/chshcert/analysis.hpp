#pragma once

#include "chshcert/concurrence.hpp"

#include <cstdint>
#include <string>

namespace chshcert {

struct BlockRecord {
    std::optional<Bipartition> bipartition;
    PairIndex alpha;
    PairIndex beta;
    double weight = 0.0;
    double raw_value = 0.0;    // max over settings of Tr(B rho) = weight * block_value
    double block_value = 0.0;  // horodecki_max of the normalized block
    MeasurementSettings settings;  // realizes both values
    double block_concurrence = 0.0;
};

struct WitnessSummary {
    double expectation = 0.0;  // Tr(W rho) for the best block's witness
    bool nontrivial = false;
};

// Local filter of a violating block: P = A L_alpha0 and Q = B L_beta0 map
// the window onto C^2; the filtered state keeps the block's concurrence.
struct DistillCertificate {
    PairIndex alpha0;
    PairIndex beta0;
    std::optional<Bipartition> bipartition;
    ComplexMatrix p_op;       // 2 x dA
    ComplexMatrix q_op;       // 2 x dB
    ComplexMatrix projected;  // normalized 4x4 two-qubit state
    double concurrence = 0.0;
};

struct ViolationReport {
    std::vector<BlockRecord> blocks;  // canonical (p, alpha, beta) order
    double max_raw = 0.0;
    double max_block = 0.0;
    bool entangled = false;  // some block concurrence above threshold
    std::optional<WitnessSummary> witness;
    std::optional<DistillCertificate> certificate;
};

ViolationReport scan_bipartite(const DensityOperator& rho);

// Scans every canonical bipartite decomposition; refuses m > 8.
ViolationReport scan_multipartite(const DensityOperator& rho);

// Max of |Tr(B rho)| over `samples` random (state, window, settings)
// triples; the Cirel'son bound caps it at 2 sqrt(2).
double verify_cirelson(const std::vector<int>& dims, int samples, std::uint64_t seed);

// Max of |Tr(B sigma)| over every block (settings optimized in closed form)
// plus sampled random settings, for a convex mixture of product pure
// states; bounded by 2.
double separable_mixture_check(const std::vector<std::pair<double, PureState>>& components,
                               int settings_samples, std::uint64_t seed);

std::optional<DistillCertificate> distill_certificate(const DensityOperator& rho);

bool distillable_pure(const PureState& psi);

struct PptReport {
    bool is_ppt = false;
    bool checked = false;      // block assertions only run on PPT inputs
    bool consistent = true;    // no block exceeded 2 or carried concurrence
    double min_pt_eigenvalue = 0.0;
    double max_block_value = 0.0;
    double max_block_concurrence = 0.0;
};

PptReport ppt_consistency(const DensityOperator& rho);

// The 3x3 PPT-entangled family (parameter in (0,1)); used by the ppt suite.
DensityOperator bound_entangled_3x3(double a);

// --- named verification suites (shared by the CLI and the test rig) ---

struct SuiteOutcome {
    std::string name;
    bool pass = true;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> failures;
};

SuiteOutcome run_suite_cirelson(int samples, std::uint64_t seed);
SuiteOutcome run_suite_gisin(int samples, std::uint64_t seed);
SuiteOutcome run_suite_decomposition(int samples, std::uint64_t seed);
SuiteOutcome run_suite_ppt(int samples, std::uint64_t seed);

} // namespace chshcert
