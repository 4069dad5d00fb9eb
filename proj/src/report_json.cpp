#include "chshcert/report_json.hpp"

#include <cmath>

namespace chshcert {

using json = nlohmann::ordered_json;

json json_of(const MeasurementSettings& s) {
    json j;
    j["a1"] = s.a1;
    j["a2"] = s.a2;
    j["b1"] = s.b1;
    j["b2"] = s.b2;
    return j;
}

json json_of(const Bipartition& p) { return json::array({p.left, p.right}); }

json json_of(const ComplexMatrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json entries = json::array();
    for (std::size_t f = 0; f < m.size(); ++f)
        entries.push_back(json::array({m.data()[f].real(), m.data()[f].imag()}));
    j["entries"] = std::move(entries);
    return j;
}

json json_of(const DistillCertificate& cert) {
    json j;
    j["p"] = cert.bipartition ? json_of(*cert.bipartition) : json(nullptr);
    j["alpha"] = json::array({cert.alpha0.i, cert.alpha0.j});
    j["beta"] = json::array({cert.beta0.i, cert.beta0.j});
    j["concurrence"] = cert.concurrence;
    j["P"] = json_of(cert.p_op);
    j["Q"] = json_of(cert.q_op);
    json proj;
    proj["side"] = cert.projected.rows();
    json entries = json::array();
    for (std::size_t f = 0; f < cert.projected.size(); ++f)
        entries.push_back(
            json::array({cert.projected.data()[f].real(), cert.projected.data()[f].imag()}));
    proj["entries"] = std::move(entries);
    j["projected"] = std::move(proj);
    return j;
}

json json_of(const PptReport& rep) {
    json j;
    j["is_ppt"] = rep.is_ppt;
    j["checked"] = rep.checked;
    j["consistent"] = rep.consistent;
    if (std::isnan(rep.min_pt_eigenvalue)) j["min_pt_eigenvalue"] = nullptr;
    else j["min_pt_eigenvalue"] = rep.min_pt_eigenvalue;
    j["max_block_value"] = rep.max_block_value;
    j["max_block_concurrence"] = rep.max_block_concurrence;
    return j;
}

json json_of(const SuiteOutcome& outcome) {
    json j;
    j["suite"] = outcome.name;
    j["pass"] = outcome.pass;
    json metrics;
    for (const auto& [k, v] : outcome.metrics) metrics[k] = v;
    j["metrics"] = std::move(metrics);
    j["failures"] = outcome.failures;
    return j;
}

json report_to_json(const ViolationReport& rep) {
    json j;
    j["semantics"] = json{{"raw", rep.max_raw}, {"block", rep.max_block}};

    json blocks = json::array();
    for (const BlockRecord& r : rep.blocks) {
        json b;
        b["p"] = r.bipartition ? json_of(*r.bipartition) : json(nullptr);
        b["alpha"] = json::array({r.alpha.i, r.alpha.j});
        b["beta"] = json::array({r.beta.i, r.beta.j});
        b["weight"] = r.weight;
        b["raw_value"] = r.raw_value;
        b["block_value"] = r.block_value;
        b["settings"] = json_of(r.settings);
        b["block_concurrence"] = r.block_concurrence;
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);

    json summary;
    summary["entangled"] = rep.entangled;
    summary["max_raw"] = rep.max_raw;
    summary["max_block"] = rep.max_block;
    if (rep.witness) {
        json w;
        w["expectation"] = rep.witness->expectation;
        w["nontrivial"] = rep.witness->nontrivial;
        summary["witness"] = std::move(w);
    } else {
        summary["witness"] = nullptr;
    }
    summary["certificate"] = rep.certificate ? json_of(*rep.certificate) : json(nullptr);
    j["summary"] = std::move(summary);
    return j;
}

} // namespace chshcert
