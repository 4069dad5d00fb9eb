#pragma once

#include "chshcert/analysis.hpp"

#include <json.hpp>

// Stable JSON shapes for reports. Numbers serialize with nlohmann's
// shortest-round-trip formatting, so identical inputs give identical bytes.

namespace chshcert {

nlohmann::ordered_json json_of(const MeasurementSettings& s);
nlohmann::ordered_json json_of(const Bipartition& p);
nlohmann::ordered_json json_of(const ComplexMatrix& m);
nlohmann::ordered_json json_of(const DistillCertificate& cert);
nlohmann::ordered_json json_of(const PptReport& rep);
nlohmann::ordered_json json_of(const SuiteOutcome& outcome);

nlohmann::ordered_json report_to_json(const ViolationReport& rep);

} // namespace chshcert
