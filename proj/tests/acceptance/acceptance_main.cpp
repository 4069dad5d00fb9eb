// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Sample counts, tolerances, and runtime ceilings are fixed here.

#include "chshcert/analysis.hpp"
#include "chshcert/report_json.hpp"
#include "chshcert/rng.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace chshcert;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kCirelson = 2.0 * kRoot2;

struct Criterion {
    std::string name;
    bool pass = true;
    double seconds = 0.0;
    double limit_seconds = 0.0;  // 0 = no stated limit
    std::string detail;
};

PureState singlet() {
    return make_pure({2, 2}, {{{1, 2}, cplx(1.0, 0.0)}, {{2, 1}, cplx(-1.0, 0.0)}});
}

double max_pure_block_value(const PureState& psi) {
    double best = 0.0;
    for (const auto& [alpha, beta] : enumerate_blocks(psi)) {
        const auto block = project_block_pure(psi, alpha, beta);
        if (block) best = std::max(best, horodecki_max(block->matrix).value);
    }
    return best;
}

Criterion criterion_cirelson() {
    Criterion c{"1 cirelson-bound", true, 0, 10.0, ""};
    double max_seen = 0.0;
    const std::vector<std::vector<int>> dims_list = {{2, 2}, {3, 3}, {4, 5}, {6, 6}};
    for (std::size_t d = 0; d < dims_list.size(); ++d)
        max_seen = std::max(max_seen, verify_cirelson(dims_list[d], 2500, derive_seed(4001, d)));
    const bool bounded = max_seen <= kCirelson + 1e-9;

    const ViolationReport rep = scan_bipartite(to_density(singlet()));
    bool saturates = std::abs(rep.max_raw - kCirelson) <= 1e-9;
    // the derived settings must reproduce the saturation through Tr(B rho)
    for (const BlockRecord& r : rep.blocks) {
        const double direct =
            expectation_raw(make_chsh(r.alpha, r.beta, r.settings, {2, 2}), to_density(singlet()));
        saturates = saturates && std::abs(direct - kCirelson) <= 1e-9;
    }
    c.pass = bounded && saturates;
    std::ostringstream ss;
    ss << "max |Tr(B rho)| = " << max_seen << " over 10^4 triples, singlet raw = " << rep.max_raw;
    c.detail = ss.str();
    return c;
}

Criterion criterion_gisin() {
    Criterion c{"2 gisin-iff-block-semantics", true, 0, 30.0, ""};
    int mismatches = 0;
    const std::vector<std::vector<int>> dims_list = {{2, 2}, {3, 3}, {4, 4}, {6, 6}};
    for (std::size_t d = 0; d < dims_list.size(); ++d) {
        for (int k = 0; k < 500; ++k) {
            const PureState psi = random_pure(dims_list[d], derive_seed(4100 + d, k));
            const bool entangled = concurrence_pure(psi) > 1e-7;
            const bool violates = max_pure_block_value(psi) > 2.0 + 1e-12;
            if (entangled != violates) ++mismatches;
        }
    }
    double product_dev = 0.0;
    for (int k = 0; k < 200; ++k) {
        const PureState prod = random_product({4, 4}, derive_seed(4200, k));
        product_dev = std::max(product_dev, std::abs(max_pure_block_value(prod) - 2.0));
    }
    c.pass = (mismatches == 0) && (product_dev <= 1e-9);
    std::ostringstream ss;
    ss << mismatches << " iff mismatches over 2000 states, product deviation " << product_dev;
    c.detail = ss.str();
    return c;
}

Criterion criterion_semantics_gap() {
    Criterion c{"3 raw-semantics-gap", true, 0, 5.0, ""};
    const double expected = 4.0 * kRoot2 / 3.0;
    const PureState psi = make_pure(
        {3, 3}, {{{1, 1}, cplx(1, 0)}, {{2, 2}, cplx(1, 0)}, {{3, 3}, cplx(1, 0)}});
    const DensityOperator rho = to_density(psi);
    const ViolationReport rep = scan_bipartite(rho);

    double oracle_max = 0.0;
    for (const auto& [alpha, beta] : enumerate_blocks(rho))
        oracle_max = std::max(oracle_max, oracle::raw_chsh_max(rho, alpha, beta));

    const bool closed_ok = std::abs(rep.max_raw - expected) <= 1e-6;
    const bool oracle_ok = std::abs(oracle_max - rep.max_raw) <= 1e-6;
    // expected failure of the raw reading: entangled, yet no raw value
    // reaches the classical threshold
    const bool gap_documented = rep.entangled && rep.max_raw < 2.0;
    c.pass = closed_ok && oracle_ok && gap_documented;
    std::ostringstream ss;
    ss << "max_raw = " << rep.max_raw << " (closed form " << expected << ", grid oracle "
       << oracle_max << "); raw 'if' direction fails as expected (entangled, < 2)";
    c.detail = ss.str();
    return c;
}

Criterion criterion_concurrence_identities() {
    Criterion c{"4 concurrence-identities", true, 0, 30.0, ""};
    double worst_bi = 0.0;
    for (const std::vector<int>& dims :
         {std::vector<int>{2, 2}, {3, 3}, {4, 5}, {6, 6}}) {
        for (int k = 0; k < 500; ++k) {
            const PureState psi = random_pure(dims, derive_seed(4300 + dims[0] * 10 + dims[1], k));
            const double c1 = concurrence_pure(psi);
            const double c2 = concurrence_dets(psi);
            const double c3 = concurrence_blocks(psi).value;
            worst_bi = std::max({worst_bi, std::abs(c1 - c2), std::abs(c1 - c3)});
        }
    }
    double worst_multi = 0.0;
    for (const std::vector<int>& dims : {std::vector<int>{2, 2, 2}, {3, 2, 2}}) {
        for (int k = 0; k < 200; ++k) {
            const ConcurrenceReport rep =
                concurrence_multipartite(random_pure(dims, derive_seed(4400 + dims[0], k)));
            worst_multi = std::max(worst_multi, std::abs(rep.value - rep.det_value));
        }
    }
    const PureState ghz = make_pure(
        {2, 2, 2}, {{{1, 1, 1}, cplx(1, 0)}, {{2, 2, 2}, cplx(1, 0)}});
    const PureState w_state = make_pure({2, 2, 2}, {{{1, 1, 2}, cplx(1, 0)},
                                                    {{1, 2, 1}, cplx(1, 0)},
                                                    {{2, 1, 1}, cplx(1, 0)}});
    const double ghz_dev = std::abs(concurrence_multipartite(ghz).value - 1.0);
    const double w_dev =
        std::abs(concurrence_multipartite(w_state).value - std::sqrt(8.0 / 9.0));

    c.pass = worst_bi <= 1e-10 && worst_multi <= 1e-10 && ghz_dev <= 1e-10 && w_dev <= 1e-10;
    std::ostringstream ss;
    ss << "bipartite max dev " << worst_bi << ", multipartite " << worst_multi << ", GHZ "
       << ghz_dev << ", W " << w_dev;
    c.detail = ss.str();
    return c;
}

Criterion criterion_witness() {
    Criterion c{"5 witness-contract", true, 0, 0.0, ""};
    double min_expectation = 1e300;
    for (int k = 0; k < 200; ++k) {
        std::vector<std::pair<double, DensityOperator>> comps;
        for (int p = 0; p < 4; ++p)
            comps.emplace_back(0.25, to_density(random_product({3, 3}, derive_seed(4500, 4 * k + p))));
        const DensityOperator sigma = mix(comps);
        const ViolationReport rep = scan_bipartite(sigma);
        if (rep.witness) min_expectation = std::min(min_expectation, rep.witness->expectation);
        // direct matrix route on a subsample
        if (k % 25 == 0 && !rep.blocks.empty()) {
            const BlockRecord& sample = rep.blocks.front();
            const Witness w =
                make_witness(make_chsh(sample.alpha, sample.beta, sample.settings, sigma.dims()));
            const double direct = trace_product_hermitian(w.matrix, sigma.matrix()).real();
            min_expectation = std::min(min_expectation, direct);
        }
    }

    const ViolationReport srep = scan_bipartite(to_density(singlet()));
    const double singlet_w = srep.witness ? srep.witness->expectation : 1e300;
    const double expected = 2.0 - kCirelson;

    c.pass = min_expectation >= -1e-9 && std::abs(singlet_w - expected) <= 1e-9;
    std::ostringstream ss;
    ss << "min Tr(W sigma) = " << min_expectation << " over 200 mixtures, singlet Tr(W rho) = "
       << singlet_w;
    c.detail = ss.str();
    return c;
}

Criterion criterion_distillation() {
    Criterion c{"6 distillation-certificates", true, 0, 20.0, ""};
    int produced = 0;
    double worst_gap = 0.0;
    int k = 0;
    for (int done = 0; done < 200 && k < 1000; ++k) {
        const PureState psi = random_pure({5, 5}, derive_seed(4600, k));
        if (concurrence_pure(psi) <= 1e-3) continue;
        ++done;
        const DensityOperator rho = to_density(psi);
        const auto cert = distill_certificate(rho);
        if (!cert) continue;
        ++produced;
        const auto block = project_block(rho, cert->alpha0, cert->beta0);
        if (block)
            worst_gap = std::max(worst_gap, std::abs(cert->concurrence - wootters(block->matrix)));
        else
            worst_gap = 1.0;
    }
    int product_certs = 0;
    for (int p = 0; p < 50; ++p)
        if (distill_certificate(to_density(random_product({5, 5}, derive_seed(4700, p)))))
            ++product_certs;

    c.pass = produced == 200 && worst_gap <= 1e-10 && product_certs == 0;
    std::ostringstream ss;
    ss << produced << "/200 certificates, max |cert - block| = " << worst_gap << ", "
       << product_certs << " false certificates on products";
    c.detail = ss.str();
    return c;
}

Criterion criterion_ppt() {
    Criterion c{"7 ppt-consistency", true, 0, 0.0, ""};
    double max_block = 0.0;
    bool all_ok = true;
    for (double a : {0.2, 0.5, 0.85}) {
        const PptReport rep = ppt_consistency(bound_entangled_3x3(a));
        all_ok = all_ok && rep.is_ppt && rep.checked && rep.consistent;
        max_block = std::max(max_block, rep.max_block_value);
    }
    for (int k = 0; k < 100; ++k) {
        std::vector<std::pair<double, DensityOperator>> comps;
        for (int p = 0; p < 5; ++p)
            comps.emplace_back(0.2, to_density(random_product({3, 3}, derive_seed(4800, 5 * k + p))));
        const PptReport rep = ppt_consistency(mix(comps));
        all_ok = all_ok && rep.is_ppt && rep.checked && rep.consistent;
        max_block = std::max(max_block, rep.max_block_value);
    }
    c.pass = all_ok && max_block <= 2.0 + 1e-9;
    std::ostringstream ss;
    ss << "bound-entangled family + 100 mixtures, max block value " << max_block;
    c.detail = ss.str();
    return c;
}

Criterion criterion_oracle_agreement() {
    Criterion c{"8 horodecki-vs-grid", true, 0, 0.0, ""};
    double worst = 0.0, worst_cert = 0.0;
    for (int k = 0; k < 100; ++k) {
        const ComplexMatrix rho = oracle::random_density4(derive_seed(4900, k), 1 + k % 4);
        const ChshOptimum opt = horodecki_max(rho);
        worst = std::max(worst, std::abs(opt.value - oracle::block_chsh_max(rho)));

        BlockState block;
        block.matrix = rho;
        block.weight = 1.0;
        worst_cert = std::max(worst_cert,
                              std::abs(expectation_block(opt.settings, block) - opt.value));
    }
    c.pass = worst <= 1e-3 && worst_cert <= 1e-8;
    std::ostringstream ss;
    ss << "max |closed - grid| = " << worst << ", settings reproduce value within " << worst_cert;
    c.detail = ss.str();
    return c;
}

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const std::string out_file = "/tmp/chshcert_acc_out.txt";
    const std::string cmd = std::string(CHSHCERT_CLI_PATH) + " " + args + " > " + out_file +
                            " 2> /tmp/chshcert_acc_err.txt";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

Criterion criterion_cli_determinism() {
    Criterion c{"9 cli-determinism", true, 0, 0.0, ""};
    bool ok = true;

    const CliRun r1 = run_cli("random --dims 3 3 --seed 7");
    const CliRun r2 = run_cli("random --dims 3 3 --seed 7");
    ok = ok && r1.exit_code == 0 && r1.out == r2.out && !r1.out.empty();

    std::ofstream f("/tmp/chshcert_acc_state.json", std::ios::binary);
    f << r1.out;
    f.close();
    const CliRun a1 = run_cli("analyze /tmp/chshcert_acc_state.json");
    const CliRun a2 = run_cli("analyze /tmp/chshcert_acc_state.json");
    ok = ok && a1.exit_code == 0 && a1.out == a2.out;

    const CliRun v1 = run_cli("verify --suite decomposition --samples 40 --seed 11");
    const CliRun v2 = run_cli("verify --suite decomposition --samples 40 --seed 11");
    ok = ok && v1.exit_code == 0 && v1.out == v2.out;

    std::ofstream g("/tmp/chshcert_acc_bad.json", std::ios::binary);
    g << "{broken";
    g.close();
    ok = ok && run_cli("analyze /tmp/chshcert_acc_bad.json").exit_code == 2;

    std::ofstream h("/tmp/chshcert_acc_badrho.json", std::ios::binary);
    h << R"({"kind":"mixed","dims":[2],"matrix":{"side":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}})";
    h.close();
    ok = ok && run_cli("analyze /tmp/chshcert_acc_badrho.json").exit_code == 3;

    c.pass = ok;
    c.detail = "random/analyze/verify byte-identical across runs; exit codes 0/2/3 honored";
    return c;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    std::vector<Criterion (*)()> criteria = {
        criterion_cirelson,       criterion_gisin,         criterion_semantics_gap,
        criterion_concurrence_identities, criterion_witness, criterion_distillation,
        criterion_ppt,            criterion_oracle_agreement, criterion_cli_determinism,
    };

    int failures = 0;
    for (auto* fn : criteria) {
        const auto t0 = clock::now();
        Criterion c = fn();
        c.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        if (c.limit_seconds > 0.0 && c.seconds > c.limit_seconds) {
            c.pass = false;
            c.detail += " [exceeded runtime limit]";
        }
        std::printf("%s criterion-%s (%.2fs%s): %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.seconds,
                    c.limit_seconds > 0 ? (" / limit " + std::to_string((int)c.limit_seconds) + "s").c_str()
                                        : "",
                    c.detail.c_str());
        if (!c.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all acceptance criteria passed\n");
    return failures == 0 ? 0 : 1;
}
