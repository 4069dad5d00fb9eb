#include "chshcert/analysis.hpp"

#include "chshcert/parallel.hpp"
#include "chshcert/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iterator>
#include <random>

namespace chshcert {

namespace {

constexpr double kCirelson = 2.0 * 1.4142135623730951;

Vec3 random_unit_vec(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        const double n = vec_norm(v);
        if (n > 1e-6) {
            for (double& x : v) x /= n;
            return v;
        }
    }
}

MeasurementSettings random_settings(std::mt19937_64& rng) {
    return MeasurementSettings(random_unit_vec(rng), random_unit_vec(rng),
                               random_unit_vec(rng), random_unit_vec(rng));
}

PairIndex random_pair(std::mt19937_64& rng, int dim) {
    std::uniform_int_distribution<int> pick_j(2, dim);
    const int j = pick_j(rng);
    std::uniform_int_distribution<int> pick_i(1, j - 1);
    return PairIndex(pick_i(rng), j);
}

std::vector<BlockRecord> scan_blocks(const DensityOperator& bip_rho,
                                     const std::optional<Bipartition>& p) {
    std::vector<BlockRecord> records;
    for (const auto& [alpha, beta] : enumerate_blocks(bip_rho)) {
        const auto block = project_block(bip_rho, alpha, beta);
        if (!block) continue;
        const ChshOptimum opt = horodecki_max(block->matrix);
        BlockRecord rec;
        rec.bipartition = p;
        rec.alpha = alpha;
        rec.beta = beta;
        rec.weight = block->weight;
        rec.block_value = opt.value;
        rec.raw_value = block->weight * opt.value;
        rec.settings = opt.settings;
        rec.block_concurrence = wootters(block->matrix);
        records.push_back(std::move(rec));
    }
    return records;
}

DistillCertificate certificate_for(const DensityOperator& bip_rho, const PairIndex& alpha0,
                                   const PairIndex& beta0,
                                   const std::optional<Bipartition>& p) {
    const int da = bip_rho.dims()[0], db = bip_rho.dims()[1];

    // P = A L_alpha0 = |0><j| - |1><i| ; Q likewise from beta0.
    ComplexMatrix p_op(2, static_cast<std::size_t>(da));
    p_op(0, alpha0.j - 1) = cplx(1.0, 0.0);
    p_op(1, alpha0.i - 1) = cplx(-1.0, 0.0);
    ComplexMatrix q_op(2, static_cast<std::size_t>(db));
    q_op(0, beta0.j - 1) = cplx(1.0, 0.0);
    q_op(1, beta0.i - 1) = cplx(-1.0, 0.0);

    const ComplexMatrix filter = kron(p_op, q_op);  // 4 x (da*db)
    ComplexMatrix projected = filter * bip_rho.matrix() * filter.dagger();
    const double tr = projected.trace().real();
    if (tr <= kWeightCutoff)
        throw Error(Error::Kind::AbsentBlock, "certificate block has vanishing weight");
    projected *= cplx(1.0 / tr, 0.0);

    DistillCertificate cert;
    cert.alpha0 = alpha0;
    cert.beta0 = beta0;
    cert.bipartition = p;
    cert.p_op = std::move(p_op);
    cert.q_op = std::move(q_op);
    cert.concurrence = wootters(projected);
    cert.projected = std::move(projected);
    return cert;
}

// Best block by concurrence; nullopt when nothing clears the threshold.
std::optional<std::size_t> most_entangled(const std::vector<BlockRecord>& records) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < records.size(); ++k)
        if (records[k].block_concurrence > kEntangledThreshold &&
            (!best || records[k].block_concurrence > records[*best].block_concurrence))
            best = k;
    return best;
}

ViolationReport assemble_report(std::vector<BlockRecord> records,
                                const DensityOperator& original) {
    ViolationReport rep;
    rep.blocks = std::move(records);
    std::optional<std::size_t> winner;
    for (std::size_t k = 0; k < rep.blocks.size(); ++k) {
        const BlockRecord& r = rep.blocks[k];
        rep.max_raw = std::max(rep.max_raw, r.raw_value);
        rep.max_block = std::max(rep.max_block, r.block_value);
        if (!winner || r.block_value > rep.blocks[*winner].block_value) winner = k;
        if (r.block_concurrence > kEntangledThreshold) rep.entangled = true;
    }

    if (winner) {
        const BlockRecord& w = rep.blocks[*winner];
        const DensityOperator scanned =
            w.bipartition ? regroup_density(original, *w.bipartition) : original;
        const ChshOperator op = make_chsh(w.alpha, w.beta, w.settings, scanned.dims());
        const Witness wit = make_witness(op);
        WitnessSummary ws;
        ws.expectation = 2.0 - expectation_raw(op, scanned);
        ws.nontrivial = wit.nontrivial;
        rep.witness = ws;
    }

    const auto cert_idx = most_entangled(rep.blocks);
    if (cert_idx) {
        const BlockRecord& c = rep.blocks[*cert_idx];
        const DensityOperator scanned =
            c.bipartition ? regroup_density(original, *c.bipartition) : original;
        rep.certificate = certificate_for(scanned, c.alpha, c.beta, c.bipartition);
    }
    return rep;
}

} // namespace

ViolationReport scan_bipartite(const DensityOperator& rho) {
    if (rho.subsystems() != 2)
        throw Error(Error::Kind::Arity, "bipartite scan expects two subsystems");
    return assemble_report(scan_blocks(rho, std::nullopt), rho);
}

ViolationReport scan_multipartite(const DensityOperator& rho) {
    const int m = rho.subsystems();
    if (m < 3) throw Error(Error::Kind::Arity, "multipartite scan expects m >= 3");
    if (m > 8) throw Error(Error::Kind::Size, "multipartite scan refuses m > 8");

    std::vector<BlockRecord> records;
    for (const Bipartition& p : all_bipartitions(m)) {
        const DensityOperator grouped = regroup_density(rho, p);
        auto part = scan_blocks(grouped, p);
        records.insert(records.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    return assemble_report(std::move(records), rho);
}

double verify_cirelson(const std::vector<int>& dims, int samples, std::uint64_t seed) {
    if (dims.size() != 2)
        throw Error(Error::Kind::Arity, "Cirel'son sampling expects bipartite dims");
    if (samples < 1) throw Error(Error::Kind::Input, "samples must be >= 1");

    std::vector<double> values(static_cast<std::size_t>(samples), 0.0);
    parallel_for(values.size(), [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        const PureState psi = random_pure(dims, rng());
        const DensityOperator rho = to_density(psi);
        const PairIndex alpha = random_pair(rng, dims[0]);
        const PairIndex beta = random_pair(rng, dims[1]);
        const ChshOperator op = make_chsh(alpha, beta, random_settings(rng), dims);
        values[k] = std::abs(expectation_raw(op, rho));
    });
    return *std::max_element(values.begin(), values.end());
}

double separable_mixture_check(const std::vector<std::pair<double, PureState>>& components,
                               int settings_samples, std::uint64_t seed) {
    if (components.empty())
        throw Error(Error::Kind::Input, "mixture needs at least one component");
    std::vector<std::pair<double, DensityOperator>> parts;
    parts.reserve(components.size());
    for (const auto& [w, psi] : components) {
        if (psi.subsystems() != 2)
            throw Error(Error::Kind::Arity, "components must be bipartite");
        if (concurrence_dets(psi) > kEntangledThreshold)
            throw Error(Error::Kind::Input, "mixture component is not a product state");
        parts.emplace_back(w, to_density(psi));
    }
    const DensityOperator sigma = mix(parts);

    double best = 0.0;
    const auto blocks = enumerate_blocks(sigma);
    for (const auto& [alpha, beta] : blocks) {
        const auto block = project_block(sigma, alpha, beta);
        if (!block) continue;
        best = std::max(best, block->weight * horodecki_max(block->matrix).value);
    }

    // sampled full-operator expectations exercise the raw route as well
    std::vector<double> sampled(
        blocks.empty() ? 0 : static_cast<std::size_t>(std::max(settings_samples, 0)), 0.0);
    parallel_for(sampled.size(), [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
        const auto& [alpha, beta] = blocks[pick(rng)];
        const ChshOperator op = make_chsh(alpha, beta, random_settings(rng), sigma.dims());
        sampled[k] = std::abs(expectation_raw(op, sigma));
    });
    for (double v : sampled) best = std::max(best, v);
    return best;
}

std::optional<DistillCertificate> distill_certificate(const DensityOperator& rho) {
    const int m = rho.subsystems();
    if (m == 2) {
        const auto records = scan_blocks(rho, std::nullopt);
        const auto best = most_entangled(records);
        if (!best) return std::nullopt;
        const BlockRecord& b = records[*best];
        return certificate_for(rho, b.alpha, b.beta, std::nullopt);
    }
    if (m > 8) throw Error(Error::Kind::Size, "certificate search refuses m > 8");

    std::optional<DistillCertificate> out;
    double best_c = kEntangledThreshold;
    for (const Bipartition& p : all_bipartitions(m)) {
        const DensityOperator grouped = regroup_density(rho, p);
        const auto records = scan_blocks(grouped, p);
        const auto best = most_entangled(records);
        if (!best) continue;
        const BlockRecord& b = records[*best];
        if (b.block_concurrence > best_c) {
            best_c = b.block_concurrence;
            out = certificate_for(grouped, b.alpha, b.beta, p);
        }
    }
    return out;
}

bool distillable_pure(const PureState& psi) {
    if (psi.subsystems() != 2)
        throw Error(Error::Kind::Arity, "pure distillability check expects a bipartite state");
    return concurrence_pure(psi) > kEntangledThreshold;
}

PptReport ppt_consistency(const DensityOperator& rho) {
    if (rho.subsystems() != 2)
        throw Error(Error::Kind::Arity, "PPT consistency expects a bipartite state");
    const std::size_t da = static_cast<std::size_t>(rho.dims()[0]);
    const std::size_t db = static_cast<std::size_t>(rho.dims()[1]);
    const ComplexMatrix pt = partial_transpose(rho.matrix(), da, db, Side::B);

    PptReport rep;
    rep.min_pt_eigenvalue = (pt.rows() <= ComplexMatrix::kMaxEigSide)
                                ? min_eigenvalue(pt)
                                : std::numeric_limits<double>::quiet_NaN();
    rep.is_ppt = is_psd_within(pt, 1e-9);
    if (!rep.is_ppt) return rep;  // nothing to assert for NPT states

    rep.checked = true;
    for (const BlockRecord& r : scan_blocks(rho, std::nullopt)) {
        rep.max_block_value = std::max(rep.max_block_value, r.block_value);
        rep.max_block_concurrence = std::max(rep.max_block_concurrence, r.block_concurrence);
    }
    rep.consistent = rep.max_block_value <= 2.0 + 1e-9 &&
                     rep.max_block_concurrence <= kEntangledThreshold;
    return rep;
}

DensityOperator bound_entangled_3x3(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw Error(Error::Kind::Input, "family parameter must lie in (0, 1)");
    const double s = std::sqrt(1.0 - a * a) / 2.0;
    const double norm = 1.0 / (8.0 * a + 1.0);
    ComplexMatrix m(9, 9);
    for (int p : {0, 4, 8})
        for (int q : {0, 4, 8}) m(p, q) = a;
    for (int p : {1, 2, 3, 5, 7}) m(p, p) = a;
    m(6, 6) = (1.0 + a) / 2.0;
    m(8, 8) = (1.0 + a) / 2.0;
    m(6, 8) = s;
    m(8, 6) = s;
    m *= cplx(norm, 0.0);
    return DensityOperator({3, 3}, std::move(m));
}

// --- verification suites ---

namespace {

void record(SuiteOutcome& out, const std::string& key, double value) {
    out.metrics.emplace_back(key, value);
}

void require(SuiteOutcome& out, bool ok, const std::string& what) {
    if (!ok) {
        out.pass = false;
        out.failures.push_back(what);
    }
}

PureState singlet() {
    return make_pure({2, 2}, {{{1, 2}, cplx(1.0, 0.0)}, {{2, 1}, cplx(-1.0, 0.0)}});
}

} // namespace

SuiteOutcome run_suite_cirelson(int samples, std::uint64_t seed) {
    SuiteOutcome out{"cirelson", true, {}, {}};
    const std::vector<std::vector<int>> dims_list = {{2, 2}, {3, 4}, {6, 6}};
    const int per = std::max(1, samples / static_cast<int>(dims_list.size()));
    double max_seen = 0.0;
    for (std::size_t d = 0; d < dims_list.size(); ++d)
        max_seen = std::max(max_seen, verify_cirelson(dims_list[d], per, derive_seed(seed, d)));
    record(out, "max_abs_expectation", max_seen);
    record(out, "bound", kCirelson);
    require(out, max_seen <= kCirelson + 1e-9, "sampled expectation exceeded the Cirel'son bound");

    const ViolationReport rep = scan_bipartite(to_density(singlet()));
    record(out, "singlet_max_raw", rep.max_raw);
    require(out, std::abs(rep.max_raw - kCirelson) <= 1e-9,
            "singlet failed to saturate the Cirel'son bound");
    return out;
}

SuiteOutcome run_suite_gisin(int samples, std::uint64_t seed) {
    SuiteOutcome out{"gisin", true, {}, {}};
    const std::vector<std::vector<int>> dims_list = {{2, 2}, {3, 3}, {4, 4}, {6, 6}};

    int mismatches = 0;
    for (std::size_t d = 0; d < dims_list.size(); ++d) {
        std::vector<int> bad(static_cast<std::size_t>(samples), 0);
        parallel_for(bad.size(), [&](std::size_t k) {
            const PureState psi =
                random_pure(dims_list[d], derive_seed(seed, d * 1000003 + k));
            const double c = concurrence_pure(psi);
            double max_block = 0.0;
            for (const auto& [alpha, beta] : enumerate_blocks(psi)) {
                const auto block = project_block_pure(psi, alpha, beta);
                if (!block) continue;
                max_block = std::max(max_block, horodecki_max(block->matrix).value);
            }
            const bool entangled = c > kEntangledThreshold;
            const bool violates = max_block > 2.0 + 1e-12;
            bad[k] = (entangled != violates) ? 1 : 0;
        });
        for (int b : bad) mismatches += b;
    }
    record(out, "iff_mismatches", mismatches);
    require(out, mismatches == 0, "entanglement and block violation disagreed on a pure state");

    const int product_count = std::min(samples, 200);
    std::vector<double> dev(static_cast<std::size_t>(product_count), 0.0);
    parallel_for(dev.size(), [&](std::size_t k) {
        const PureState psi = random_product({4, 4}, derive_seed(seed ^ 0xABCDu, k));
        double max_block = 0.0;
        for (const auto& [alpha, beta] : enumerate_blocks(psi)) {
            const auto block = project_block_pure(psi, alpha, beta);
            if (!block) continue;
            max_block = std::max(max_block, horodecki_max(block->matrix).value);
        }
        dev[k] = std::abs(max_block - 2.0);
    });
    const double worst = dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
    record(out, "product_max_block_deviation", worst);
    require(out, worst <= 1e-9, "a product state strayed from block value 2");
    return out;
}

SuiteOutcome run_suite_decomposition(int samples, std::uint64_t seed) {
    SuiteOutcome out{"decomposition", true, {}, {}};
    const std::vector<std::vector<int>> dims_list = {{2, 2}, {3, 3}, {4, 5}, {6, 6}};

    double worst_bi = 0.0;
    for (std::size_t d = 0; d < dims_list.size(); ++d) {
        std::vector<double> dev(static_cast<std::size_t>(samples), 0.0);
        parallel_for(dev.size(), [&](std::size_t k) {
            const PureState psi =
                random_pure(dims_list[d], derive_seed(seed, d * 2000003 + k));
            const double c1 = concurrence_pure(psi);
            const double c2 = concurrence_dets(psi);
            const double c3 = concurrence_blocks(psi).value;
            dev[k] = std::max(std::abs(c1 - c2), std::max(std::abs(c1 - c3), std::abs(c2 - c3)));
        });
        worst_bi = std::max(worst_bi, *std::max_element(dev.begin(), dev.end()));
    }
    record(out, "bipartite_max_disagreement", worst_bi);
    require(out, worst_bi <= 1e-10, "bipartite concurrence formulas disagreed");

    const std::vector<std::vector<int>> multi_dims = {{2, 2, 2}, {3, 2, 2}};
    const int multi_samples = std::min(samples, 200);
    double worst_multi = 0.0;
    for (std::size_t d = 0; d < multi_dims.size(); ++d) {
        std::vector<double> dev(static_cast<std::size_t>(multi_samples), 0.0);
        parallel_for(dev.size(), [&](std::size_t k) {
            const PureState psi =
                random_pure(multi_dims[d], derive_seed(seed, d * 3000017 + k + 7777));
            const ConcurrenceReport rep = concurrence_multipartite(psi);
            dev[k] = std::abs(rep.value - rep.det_value);
        });
        worst_multi = std::max(worst_multi, *std::max_element(dev.begin(), dev.end()));
    }
    record(out, "multipartite_max_disagreement", worst_multi);
    require(out, worst_multi <= 1e-10, "multipartite concurrence forms disagreed");

    const PureState ghz = make_pure(
        {2, 2, 2}, {{{1, 1, 1}, cplx(1.0, 0.0)}, {{2, 2, 2}, cplx(1.0, 0.0)}});
    const PureState w_state = make_pure({2, 2, 2}, {{{1, 1, 2}, cplx(1.0, 0.0)},
                                                    {{1, 2, 1}, cplx(1.0, 0.0)},
                                                    {{2, 1, 1}, cplx(1.0, 0.0)}});
    const double ghz_c = concurrence_multipartite(ghz).value;
    const double w_c = concurrence_multipartite(w_state).value;
    record(out, "ghz_concurrence", ghz_c);
    record(out, "w_concurrence", w_c);
    require(out, std::abs(ghz_c - 1.0) <= 1e-10, "GHZ concurrence is not 1");
    require(out, std::abs(w_c - std::sqrt(8.0 / 9.0)) <= 1e-10, "W concurrence is not sqrt(8/9)");
    return out;
}

SuiteOutcome run_suite_ppt(int samples, std::uint64_t seed) {
    SuiteOutcome out{"ppt", true, {}, {}};
    double max_block = 0.0;

    for (double a : {0.2, 0.5, 0.85}) {
        const PptReport rep = ppt_consistency(bound_entangled_3x3(a));
        require(out, rep.is_ppt, "bound-entangled family member is not PPT numerically");
        require(out, rep.checked && rep.consistent,
                "bound-entangled family member produced a violating block");
        max_block = std::max(max_block, rep.max_block_value);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int k = 0; k < samples; ++k) {
        const int parts = 6;
        std::vector<std::pair<double, DensityOperator>> comps;
        double total = 0.0;
        std::vector<double> ws(parts);
        for (double& w : ws) {
            w = uni(rng);
            total += w;
        }
        for (int c = 0; c < parts; ++c)
            comps.emplace_back(ws[c] / total,
                               to_density(random_product({3, 3}, derive_seed(seed, k * 31 + c))));
        const PptReport rep = ppt_consistency(mix(comps));
        require(out, rep.is_ppt, "separable mixture tested NPT");
        require(out, rep.checked && rep.consistent, "separable mixture produced a violating block");
        max_block = std::max(max_block, rep.max_block_value);
    }
    record(out, "max_block_value", max_block);
    require(out, max_block <= 2.0 + 1e-9, "a PPT state exceeded block value 2");
    return out;
}

} // namespace chshcert
