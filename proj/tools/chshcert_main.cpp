#include "chshcert/analysis.hpp"
#include "chshcert/report_json.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace chshcert;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFail = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBadState = 3;

struct Output {
    std::string path;  // empty = stdout
    std::string format = "json";

    void emit(const json& j, const std::string& text) const {
        const std::string body = (format == "json") ? j.dump() + "\n" : text;
        if (path.empty()) {
            std::cout << body;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(Error::Kind::Input, "cannot write output file: " + path);
        out << body;
    }
};

// State-file problems split into malformed input (exit 2) and states that
// parse but break their own invariants (exit 3).
int state_error_code(const Error& e) {
    switch (e.kind()) {
        case Error::Kind::Norm:
        case Error::Kind::Symmetry:
            return kExitBadState;
        default:
            return kExitBadInput;
    }
}

LoadedState load_state_checked(const std::string& path) {
    LoadedState st = load_state_file(path);
    if (!st.is_pure) st.as_density().validate();
    return st;
}

MeasurementSettings load_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::Input, "cannot open settings file: " + path);
    json j;
    try {
        std::ostringstream ss;
        ss << in.rdbuf();
        j = json::parse(ss.str());
        Vec3 a1, a2, b1, b2;
        for (int c = 0; c < 3; ++c) {
            a1[c] = j.at("a1").at(c).get<double>();
            a2[c] = j.at("a2").at(c).get<double>();
            b1[c] = j.at("b1").at(c).get<double>();
            b2[c] = j.at("b2").at(c).get<double>();
        }
        return MeasurementSettings(a1, a2, b1, b2);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::Input, std::string("bad settings file: ") + e.what());
    }
}

json concurrence_json(const LoadedState& st) {
    json c;
    c["reduced_purity"] = nullptr;
    c["determinant_sum"] = nullptr;
    c["block_decomposition"] = nullptr;
    c["block_decomposition_unweighted"] = nullptr;
    c["multipartite"] = nullptr;
    if (st.is_pure) {
        const PureState psi = st.as_pure();
        if (psi.subsystems() == 2) {
            const ConcurrenceReport rep = concurrence_blocks(psi);
            c["reduced_purity"] = concurrence_pure(psi);
            c["determinant_sum"] = concurrence_dets(psi);
            c["block_decomposition"] = rep.value;
            c["block_decomposition_unweighted"] = rep.unweighted_value;
        } else {
            const ConcurrenceReport rep = concurrence_multipartite(psi);
            json m;
            m["block_decomposition"] = rep.value;
            m["block_decomposition_unweighted"] = rep.unweighted_value;
            m["determinant_sum"] = rep.det_value;
            c["multipartite"] = std::move(m);
        }
    } else if (st.dims.size() == 2 && st.dims[0] == 2 && st.dims[1] == 2) {
        c["wootters"] = wootters(st.as_density().matrix());
    }
    return c;
}

int cmd_analyze(const std::string& state_path, const Output& out) {
    LoadedState st;
    try {
        st = load_state_checked(state_path);
    } catch (const Error& e) {
        std::cerr << "analyze: " << e.what() << "\n";
        return state_error_code(e);
    }

    const DensityOperator rho = st.as_density();
    const ViolationReport rep =
        (rho.subsystems() == 2) ? scan_bipartite(rho) : scan_multipartite(rho);

    json j = report_to_json(rep);
    json full;
    full["state"] = json{{"kind", st.is_pure ? "pure" : "mixed"}, {"dims", st.dims}};
    for (auto& [k, v] : j.items()) full[k] = std::move(v);
    full["concurrence"] = concurrence_json(st);

    std::ostringstream text;
    text << "state: " << (st.is_pure ? "pure" : "mixed") << " dims=[";
    for (std::size_t s = 0; s < st.dims.size(); ++s)
        text << (s ? "," : "") << st.dims[s];
    text << "]\nblocks scanned: " << rep.blocks.size() << "\n"
         << "max raw CHSH value:   " << rep.max_raw << "\n"
         << "max block CHSH value: " << rep.max_block << "\n"
         << "entangled (block semantics): " << (rep.entangled ? "yes" : "no") << "\n"
         << "distillation certificate: " << (rep.certificate ? "present" : "none") << "\n";
    out.emit(full, text.str());
    return kExitOk;
}

int cmd_witness(const std::string& state_path, const std::vector<int>& alpha_in,
                const std::vector<int>& beta_in, const std::string& settings_path,
                double tol, const Output& out) {
    LoadedState st;
    try {
        st = load_state_checked(state_path);
    } catch (const Error& e) {
        std::cerr << "witness: " << e.what() << "\n";
        return state_error_code(e);
    }
    const MeasurementSettings settings = load_settings_file(settings_path);
    const DensityOperator rho = st.as_density();
    if (rho.subsystems() != 2)
        throw Error(Error::Kind::Arity, "witness expects a bipartite state");

    const PairIndex alpha(alpha_in.at(0), alpha_in.at(1));
    const PairIndex beta(beta_in.at(0), beta_in.at(1));
    const ChshOperator op = make_chsh(alpha, beta, settings, rho.dims());
    const Witness wit = make_witness(op);
    const double expectation = 2.0 - expectation_raw(op, rho);

    json j;
    j["alpha"] = json::array({alpha.i, alpha.j});
    j["beta"] = json::array({beta.i, beta.j});
    j["settings"] = json_of(settings);
    j["expectation"] = expectation;
    j["negative"] = expectation < -tol;
    j["nontrivial"] = wit.nontrivial;
    j["matrix"] = json_of(wit.matrix);

    std::ostringstream text;
    text << "Tr(W rho) = " << expectation << "\n"
         << "negative: " << (expectation < -tol ? "yes" : "no") << "\n"
         << "witness nontrivial (has negative eigenvalue): "
         << (wit.nontrivial ? "yes" : "no") << "\n";
    out.emit(j, text.str());
    return kExitOk;
}

int cmd_distill(const std::string& state_path, const Output& out) {
    LoadedState st;
    try {
        st = load_state_checked(state_path);
    } catch (const Error& e) {
        std::cerr << "distill: " << e.what() << "\n";
        return state_error_code(e);
    }
    const DensityOperator rho = st.as_density();
    const auto cert = distill_certificate(rho);

    std::string verdict;
    if (cert) verdict = "distillable";
    else if (st.is_pure) verdict = "none (pure, separable)";
    else verdict = "undetermined";

    json j;
    j["verdict"] = verdict;
    j["certificate"] = cert ? json_of(*cert) : json(nullptr);

    std::ostringstream text;
    text << verdict << "\n";
    if (cert)
        text << "block alpha=(" << cert->alpha0.i << "," << cert->alpha0.j << ") beta=("
             << cert->beta0.i << "," << cert->beta0.j
             << ") concurrence=" << cert->concurrence << "\n";
    out.emit(j, text.str());
    return kExitOk;
}

int cmd_verify(const std::string& suite, int samples, std::uint64_t seed, const Output& out) {
    SuiteOutcome outcome;
    if (suite == "cirelson") outcome = run_suite_cirelson(samples, seed);
    else if (suite == "gisin") outcome = run_suite_gisin(samples, seed);
    else if (suite == "decomposition") outcome = run_suite_decomposition(samples, seed);
    else if (suite == "ppt") outcome = run_suite_ppt(samples, seed);
    else throw Error(Error::Kind::Input, "unknown suite: " + suite);

    std::ostringstream text;
    text << "suite " << outcome.name << ": " << (outcome.pass ? "pass" : "FAIL") << "\n";
    for (const auto& [k, v] : outcome.metrics) text << "  " << k << " = " << v << "\n";
    for (const auto& f : outcome.failures) text << "  failure: " << f << "\n";
    out.emit(json_of(outcome), text.str());
    return outcome.pass ? kExitOk : kExitSuiteFail;
}

int cmd_random(const std::vector<int>& dims, std::uint64_t seed, const Output& out) {
    const PureState psi = random_pure(dims, seed);
    const std::string body = serialize_state(psi) + "\n";
    if (out.path.empty()) {
        std::cout << body;
        return kExitOk;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw Error(Error::Kind::Input, "cannot write output file: " + out.path);
    f << body;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certify entanglement, CHSH-type violation, and distillability "
                 "of finitely supported states"};
    app.require_subcommand(1);

    std::string state_path, settings_path, suite;
    std::vector<int> alpha_in, beta_in, dims;
    double tol = 1e-9;
    std::uint64_t seed = 42;
    int samples = 1000;
    Output out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", tol, "decision tolerance")->check(CLI::Range(1e-14, 1e-3));
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--out", out.path, "output path (default stdout)");
        sub->add_option("--format", out.format, "json|text")
            ->check(CLI::IsMember({"json", "text"}));
    };

    CLI::App* analyze = app.add_subcommand("analyze", "full block scan of a state file");
    analyze->add_option("state", state_path, "state JSON file")->required();
    add_common(analyze);

    CLI::App* witness = app.add_subcommand("witness", "evaluate the witness 2I - B");
    witness->add_option("state", state_path, "state JSON file")->required();
    witness->add_option("--alpha", alpha_in, "window i j on side A")->expected(2)->required();
    witness->add_option("--beta", beta_in, "window k l on side B")->expected(2)->required();
    witness->add_option("--settings", settings_path, "settings JSON file")->required();
    add_common(witness);

    CLI::App* distill = app.add_subcommand("distill", "distillation certificate");
    distill->add_option("state", state_path, "state JSON file")->required();
    add_common(distill);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "cirelson|gisin|decomposition|ppt")
        ->required()
        ->check(CLI::IsMember({"cirelson", "gisin", "decomposition", "ppt"}));
    verify->add_option("--samples", samples, "sample count");
    add_common(verify);

    CLI::App* random = app.add_subcommand("random", "write a Haar-random pure state");
    random->add_option("--dims", dims, "truncation levels per subsystem")
        ->required()
        ->expected(-1);
    add_common(random);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(state_path, out);
        if (witness->parsed())
            return cmd_witness(state_path, alpha_in, beta_in, settings_path, tol, out);
        if (distill->parsed()) return cmd_distill(state_path, out);
        if (verify->parsed()) return cmd_verify(suite, samples, seed, out);
        if (random->parsed()) return cmd_random(dims, seed, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
