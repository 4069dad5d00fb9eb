#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chshcert/states.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

// Exercises the installed binary end to end: exit codes, output bytes,
// schedule independence.

namespace {

using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/chshcert_test_") + name;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string out_file = tmp_path("stdout.txt");
    const std::string cmd = env + (env.empty() ? "" : " ") + CHSHCERT_CLI_PATH + " " + args +
                            " > " + out_file + " 2> " + tmp_path("stderr.txt");
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    f << body;
}

std::string singlet_file() {
    const std::string path = tmp_path("singlet.json");
    const double r = 1.0 / std::sqrt(2.0);
    std::ostringstream ss;
    ss << R"({"kind":"pure","dims":[2,2],"amplitudes":[)"
       << R"({"idx":[1,2],"re":)" << std::setprecision(17) << r << R"(,"im":0},)"
       << R"({"idx":[2,1],"re":)" << -r << R"(,"im":0}]})";
    write_file(path, ss.str());
    return path;
}

} // namespace

TEST_CASE("random is deterministic per seed and round-trips") {
    const std::string f1 = tmp_path("r1.json");
    const std::string f2 = tmp_path("r2.json");
    CHECK(run_cli("random --dims 3 3 --seed 7 --out " + f1).exit_code == 0);
    CHECK(run_cli("random --dims 3 3 --seed 7 --out " + f2).exit_code == 0);

    std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());

    // parses back losslessly
    const chshcert::LoadedState st = chshcert::load_state_file(f1);
    CHECK(st.is_pure);
    CHECK(chshcert::serialize_state(st.as_pure()) + "\n" == sa.str());

    // different seed, different state
    const std::string f3 = tmp_path("r3.json");
    CHECK(run_cli("random --dims 3 3 --seed 8 --out " + f3).exit_code == 0);
    std::ifstream c(f3, std::ios::binary);
    std::ostringstream sc;
    sc << c.rdbuf();
    CHECK(sc.str() != sa.str());
}

TEST_CASE("analyze reports the singlet as maximally violating") {
    const RunResult r = run_cli("analyze " + singlet_file());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("summary").at("entangled").get<bool>());
    CHECK(j.at("summary").at("max_block").get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(j.at("concurrence").at("reduced_purity").get<double>() == doctest::Approx(1.0));
    CHECK(!j.at("summary").at("certificate").is_null());

    // byte-identical across runs
    const RunResult r2 = run_cli("analyze " + singlet_file());
    CHECK(r2.out == r.out);

    // and across thread budgets
    const RunResult r3 = run_cli("analyze " + singlet_file(), "CHSH_THREADS=1");
    CHECK(r3.out == r.out);
}

TEST_CASE("analyze handles multipartite input") {
    const std::string path = tmp_path("ghz.json");
    const double r = 1.0 / std::sqrt(2.0);
    std::ostringstream ss;
    ss << std::setprecision(17)
       << R"({"kind":"pure","dims":[2,2,2],"amplitudes":[{"idx":[1,1,1],"re":)" << r
       << R"(,"im":0},{"idx":[2,2,2],"re":)" << r << R"(,"im":0}]})";
    write_file(path, ss.str());
    const RunResult res = run_cli("analyze " + path);
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("summary").at("entangled").get<bool>());
    // three bipartitions contribute blocks with p set
    CHECK(!j.at("blocks").empty());
    std::set<std::string> cuts;
    for (const auto& b : j.at("blocks")) {
        REQUIRE(!b.at("p").is_null());
        cuts.insert(b.at("p").dump());
    }
    CHECK(cuts.size() == 3);
}

TEST_CASE("analyze reports wootters for mixed two-qubit input") {
    const std::string path = tmp_path("werner.json");
    // Werner state at p = 0.8: diagonal (0.05, 0.45, 0.45, 0.05) with
    // off-diagonal -0.4 coupling the middle levels
    std::ostringstream ss;
    ss << R"({"kind":"mixed","dims":[2,2],"matrix":{"side":4,"entries":[)"
       << R"([0.05,0],[0,0],[0,0],[0,0],)"
       << R"([0,0],[0.45,0],[-0.4,0],[0,0],)"
       << R"([0,0],[-0.4,0],[0.45,0],[0,0],)"
       << R"([0,0],[0,0],[0,0],[0.05,0]]}})";
    write_file(path, ss.str());
    const RunResult r = run_cli("analyze " + path);
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("concurrence").at("wootters").get<double>() == doctest::Approx(0.7));
    CHECK(j.at("summary").at("entangled").get<bool>());
    CHECK(j.at("summary").at("max_block").get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 0.8));
}

TEST_CASE("exit code contract") {
    write_file(tmp_path("garbage.json"), "this is not json");
    CHECK(run_cli("analyze " + tmp_path("garbage.json")).exit_code == 2);

    // valid JSON, invalid density operator (trace 2)
    write_file(tmp_path("badrho.json"),
               R"({"kind":"mixed","dims":[2],"matrix":{"side":2,"entries":)"
               R"([[1,0],[0,0],[0,0],[1,0]]}})");
    CHECK(run_cli("analyze " + tmp_path("badrho.json")).exit_code == 3);

    // pure state with norm far from 1
    write_file(tmp_path("badnorm.json"),
               R"({"kind":"pure","dims":[2,2],"amplitudes":[{"idx":[1,1],"re":0.5,"im":0}]})");
    CHECK(run_cli("analyze " + tmp_path("badnorm.json")).exit_code == 3);

    CHECK(run_cli("analyze /nonexistent/state.json").exit_code == 2);
    CHECK(run_cli("analyze " + singlet_file() + " --bogus-flag").exit_code == 2);
    CHECK(run_cli("verify --suite nonsense").exit_code == 2);
    CHECK(run_cli("analyze " + singlet_file() + " --tol 1").exit_code == 2);
}

TEST_CASE("witness command") {
    const std::string settings = tmp_path("settings.json");
    const double r = 1.0 / std::sqrt(2.0);
    std::ostringstream ss;
    ss << std::setprecision(17) << R"({"a1":[0,0,1],"a2":[1,0,0],"b1":[)" << -r << ",0," << -r
       << R"(],"b2":[)" << r << ",0," << -r << "]}";
    write_file(settings, ss.str());

    const RunResult res = run_cli("witness " + singlet_file() +
                                  " --alpha 1 2 --beta 1 2 --settings " + settings);
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("expectation").get<double>() ==
          doctest::Approx(2.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(j.at("negative").get<bool>());
    CHECK(j.at("nontrivial").get<bool>());

    // window outside the truncation
    CHECK(run_cli("witness " + singlet_file() + " --alpha 1 3 --beta 1 2 --settings " + settings)
              .exit_code == 2);
}

TEST_CASE("distill command verdicts") {
    write_file(tmp_path("product.json"),
               R"({"kind":"pure","dims":[2,2],"amplitudes":[{"idx":[1,1],"re":1,"im":0}]})");
    const RunResult none = run_cli("distill " + tmp_path("product.json"));
    REQUIRE(none.exit_code == 0);
    CHECK(json::parse(none.out).at("verdict") == "none (pure, separable)");

    const RunResult s = run_cli("distill " + singlet_file());
    REQUIRE(s.exit_code == 0);
    const json js = json::parse(s.out);
    CHECK(js.at("verdict") == "distillable");
    CHECK(js.at("certificate").at("concurrence").get<double>() == doctest::Approx(1.0));

    // maximally mixed two-qubit state: PPT, no certificate
    write_file(tmp_path("mixed.json"),
               R"({"kind":"mixed","dims":[2,2],"matrix":{"side":4,"entries":)"
               R"([[0.25,0],[0,0],[0,0],[0,0],)"
               R"([0,0],[0.25,0],[0,0],[0,0],)"
               R"([0,0],[0,0],[0.25,0],[0,0],)"
               R"([0,0],[0,0],[0,0],[0.25,0]]}})");
    const RunResult undet = run_cli("distill " + tmp_path("mixed.json"));
    REQUIRE(undet.exit_code == 0);
    CHECK(json::parse(undet.out).at("verdict") == "undetermined");
}

TEST_CASE("verify command") {
    const RunResult ok = run_cli("verify --suite cirelson --samples 300 --seed 5");
    REQUIRE(ok.exit_code == 0);
    const json j = json::parse(ok.out);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("metrics").at("max_abs_expectation").get<double>() <=
          2.0 * std::sqrt(2.0) + 1e-9);

    // determinism across runs and thread budgets
    const RunResult again = run_cli("verify --suite cirelson --samples 300 --seed 5");
    CHECK(again.out == ok.out);
    const RunResult serial =
        run_cli("verify --suite cirelson --samples 300 --seed 5", "CHSH_THREADS=1");
    CHECK(serial.out == ok.out);
}

TEST_CASE("text format renders a human summary") {
    const RunResult r = run_cli("analyze " + singlet_file() + " --format text");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("entangled (block semantics): yes") != std::string::npos);
}
