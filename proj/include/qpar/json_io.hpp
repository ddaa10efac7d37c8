#pragma once

// JSON wire formats shared by the CLI and the test fixtures. Complex numbers
// are [re, im] pairs, matrices are row lists, and every parser raises
// std::runtime_error with a path-prefixed message on malformed input.

#include <string>

#include "json.hpp"

#include "qpar/gedik.hpp"
#include "qpar/optics.hpp"
#include "qpar/qudit.hpp"
#include "qpar/tomography.hpp"
#include "qpar/twophoton.hpp"

namespace qpar {

nlohmann::json complex_to_json(cx z);
cx complex_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

// Object form {"n_spatial": n, "elements": [{kind, theta_deg, mode}, ...]}.
// A bare element list is also accepted; the ladder is then sized to the
// highest referenced mode plus one extra mode per displacer.
nlohmann::json mode_network_to_json(const ModeNetwork& net);
ModeNetwork mode_network_from_json(const nlohmann::json& j);

// {"beta": b, "mz_dephasing": m, "readout_flip": r}; missing keys keep the
// ideal defaults.
nlohmann::json noise_to_json(const NoiseParams& n);
NoiseParams noise_from_json(const nlohmann::json& j);

// {"HH": n, "HV": n, "VH": n, "VV": n, "shots": N, "seed": s}.
nlohmann::json coincidence_to_json(const CoincidenceRecord& r);
CoincidenceRecord coincidence_from_json(const nlohmann::json& j);

// List of {"setting": ["D", "R"], "counts": {"DR": n, "DL": n, ...}}.
nlohmann::json counts_table_to_json(const CountsTable& t);
CountsTable counts_table_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const CertificateReport& r);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace qpar
