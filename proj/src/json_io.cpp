#include "qpar/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace qpar {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

double number_field(const json& j, const char* key, double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(std::string("missing field '") + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) fail(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

ElementKind kind_from_string(const std::string& s) {
    if (s == "HWP") return ElementKind::HWP;
    if (s == "QWP") return ElementKind::QWP;
    if (s == "PBS") return ElementKind::PBS;
    if (s == "BD") return ElementKind::BD;
    if (s == "PHASE") return ElementKind::Phase;
    fail("unknown element kind '" + s + "' (expected HWP, QWP, PBS, BD, or PHASE)");
}

const char* kind_to_string(ElementKind k) {
    switch (k) {
        case ElementKind::HWP: return "HWP";
        case ElementKind::QWP: return "QWP";
        case ElementKind::PBS: return "PBS";
        case ElementKind::BD: return "BD";
        case ElementKind::Phase: return "PHASE";
    }
    fail("unknown element kind");
}

JonesElement element_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) fail("element must be an object with a 'kind' field");
    JonesElement e;
    e.kind = kind_from_string(j["kind"].get<std::string>());
    e.theta_deg = number_field(j, "theta_deg", 0.0);
    e.mode = static_cast<int>(number_field(j, "mode", 0.0));
    return e;
}

json element_to_json(const JonesElement& e) {
    return json{{"kind", kind_to_string(e.kind)}, {"theta_deg", e.theta_deg}, {"mode", e.mode}};
}

std::vector<JonesElement> element_list_from_json(const json& j) {
    if (!j.is_array()) fail("element list must be a JSON array");
    std::vector<JonesElement> out;
    out.reserve(j.size());
    for (const json& ej : j) out.push_back(element_from_json(ej));
    return out;
}

}  // namespace

json complex_to_json(cx z) { return json::array({z.real(), z.imag()}); }

cx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail("complex number must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

Eigen::VectorXcd vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail("vector must be a non-empty JSON array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail("matrix rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
    return m;
}

json mode_network_to_json(const ModeNetwork& net) {
    json elements = json::array();
    for (const JonesElement& e : net.elements) elements.push_back(element_to_json(e));
    return json{{"n_spatial", net.n_spatial}, {"elements", std::move(elements)}};
}

ModeNetwork mode_network_from_json(const json& j) {
    ModeNetwork net;
    if (j.is_array()) {
        net.elements = element_list_from_json(j);
        int max_mode = 0;
        int displacers = 0;
        for (const JonesElement& e : net.elements) {
            max_mode = std::max(max_mode, e.mode + (e.kind == ElementKind::PBS ? 1 : 0));
            displacers += e.kind == ElementKind::BD ? 1 : 0;
        }
        net.n_spatial = max_mode + 1 + displacers;
        return net;
    }
    if (!j.is_object() || !j.contains("elements"))
        fail("network must be an element array or an object with 'elements'");
    net.elements = element_list_from_json(j["elements"]);
    net.n_spatial = static_cast<int>(number_field(j, "n_spatial", 0.0, true));
    if (net.n_spatial < 1) fail("network needs at least one spatial mode");
    return net;
}

json noise_to_json(const NoiseParams& n) {
    return json{{"beta", n.beta}, {"mz_dephasing", n.mz_dephasing}, {"readout_flip", n.readout_flip}};
}

NoiseParams noise_from_json(const json& j) {
    if (!j.is_object()) fail("noise configuration must be a JSON object");
    NoiseParams n;
    n.beta = number_field(j, "beta", n.beta);
    n.mz_dephasing = number_field(j, "mz_dephasing", n.mz_dephasing);
    n.readout_flip = number_field(j, "readout_flip", n.readout_flip);
    try {
        n.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return n;
}

json coincidence_to_json(const CoincidenceRecord& r) {
    json out;
    const auto& labels = CoincidenceRecord::labels();
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = r.counts[i];
    out["shots"] = r.shots;
    out["seed"] = r.seed;
    return out;
}

CoincidenceRecord coincidence_from_json(const json& j) {
    if (!j.is_object()) fail("coincidence record must be a JSON object");
    CoincidenceRecord r;
    const auto& labels = CoincidenceRecord::labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!j.contains(labels[i]) || !j[labels[i]].is_number_integer())
            fail(std::string("coincidence record needs integer field '") + labels[i] + "'");
        r.counts[i] = j[labels[i]].get<std::int64_t>();
        if (r.counts[i] < 0) fail("coincidence counts must be non-negative");
    }
    if (!j.contains("shots") || !j["shots"].is_number_integer())
        fail("coincidence record needs integer field 'shots'");
    r.shots = j["shots"].get<std::int64_t>();
    r.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;
    if (r.total() != r.shots) fail("coincidence counts do not add up to 'shots'");
    return r;
}

json counts_table_to_json(const CountsTable& t) {
    json out = json::array();
    for (const SettingCounts& sc : t) {
        const auto names = setting_outcome_names(sc.setting);
        json counts;
        for (std::size_t i = 0; i < 4; ++i) counts[names[i]] = sc.counts[i];
        out.push_back(json{{"setting", json::array({std::string(1, proj_char(sc.setting.photon1)),
                                                    std::string(1, proj_char(sc.setting.photon2))})},
                           {"counts", std::move(counts)}});
    }
    return out;
}

CountsTable counts_table_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail("counts table must be a non-empty JSON array");
    CountsTable table;
    table.reserve(j.size());
    for (const json& entry : j) {
        if (!entry.is_object() || !entry.contains("setting") || !entry.contains("counts"))
            fail("each counts entry needs 'setting' and 'counts'");
        const json& s = entry["setting"];
        if (!s.is_array() || s.size() != 2 || !s[0].is_string() || !s[1].is_string() ||
            s[0].get<std::string>().size() != 1 || s[1].get<std::string>().size() != 1)
            fail("'setting' must be a pair of single-letter projector names");
        SettingCounts sc{{proj_from_char(s[0].get<std::string>()[0]),
                          proj_from_char(s[1].get<std::string>()[0])},
                         {0.0, 0.0, 0.0, 0.0}};
        const auto names = setting_outcome_names(sc.setting);
        const json& counts = entry["counts"];
        if (!counts.is_object()) fail("'counts' must be an object keyed by outcome");
        for (std::size_t i = 0; i < 4; ++i) {
            if (!counts.contains(names[i])) continue;  // absent outcomes count as zero
            if (!counts[names[i]].is_number()) fail("count for '" + names[i] + "' must be a number");
            sc.counts[i] = counts[names[i]].get<double>();
            if (sc.counts[i] < 0.0) fail("count for '" + names[i] + "' is negative");
        }
        for (const auto& [key, value] : counts.items()) {
            (void)value;
            if (key != names[0] && key != names[1] && key != names[2] && key != names[3])
                fail("outcome '" + key + "' does not belong to setting " +
                     proj_char(sc.setting.photon1) + std::string(1, proj_char(sc.setting.photon2)));
        }
        table.push_back(sc);
    }
    return table;
}

json certificate_to_json(const CertificateReport& r) {
    json pairs = json::array();
    for (const WitnessPair& w : r.witness_pairs)
        pairs.push_back(json{{"x", w.x}, {"y", w.y}, {"m_positive", w.m_positive}, {"m_negative", w.m_negative}});
    return json{{"d", r.d},
                {"strategies_enumerated", r.strategies_enumerated},
                {"best_one_query_worst_case", r.best_one_query_worst_case},
                {"best_deterministic_worst_case", r.best_deterministic_worst_case},
                {"best_one_query_average", r.best_one_query_average},
                {"two_query_success", r.two_query_success},
                {"quantum_queries", r.quantum_queries},
                {"classical_queries_needed", r.classical_queries_needed},
                {"witness_pairs", std::move(pairs)},
                {"notes", r.notes}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("parse error in '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) fail("write to '" + path + "' failed");
}

}  // namespace qpar
