#include "qpar/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpar/random.hpp"

namespace qpar {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Orthonormal Hermitian basis under the Hilbert-Schmidt inner product:
// (P_a x P_b)/2 over the Pauli set {I, X, Y, Z}.
const std::array<Eigen::Matrix4cd, 16>& hermitian_basis() {
    static const std::array<Eigen::Matrix4cd, 16> basis = [] {
        std::array<Eigen::Matrix2cd, 4> pauli;
        pauli[0] = Eigen::Matrix2cd::Identity();
        pauli[1] << 0, 1, 1, 0;
        pauli[2] << 0, cx(0, -1), cx(0, 1), 0;
        pauli[3] << 1, 0, 0, -1;
        std::array<Eigen::Matrix4cd, 16> b;
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) b[4 * a + c] = kron2(pauli[a], pauli[c]) / 2.0;
        return b;
    }();
    return basis;
}

std::vector<Eigen::Matrix4cd> pooled_projectors(const std::vector<TomoSetting>& settings) {
    std::vector<Eigen::Matrix4cd> projs;
    projs.reserve(settings.size() * 4);
    for (const TomoSetting& s : settings)
        for (const Eigen::Matrix4cd& p : setting_projectors(s)) projs.push_back(p);
    return projs;
}

// Rows: real expansion tr(Pi B_k) of each projector in the Hermitian basis.
Eigen::MatrixXd design_matrix(const std::vector<Eigen::Matrix4cd>& projs) {
    const auto& basis = hermitian_basis();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(projs.size()), 16);
    for (std::size_t i = 0; i < projs.size(); ++i)
        for (int k = 0; k < 16; ++k)
            m(static_cast<Eigen::Index>(i), k) = (projs[i] * basis[static_cast<std::size_t>(k)]).trace().real();
    return m;
}

double outcome_probability(const Eigen::Matrix4cd& proj, const Eigen::Matrix4cd& rho) {
    return (proj * rho).trace().real();
}

double log_likelihood(const CountsTable& counts, const Eigen::Matrix4cd& rho) {
    double ll = 0.0;
    for (const SettingCounts& sc : counts) {
        const auto projs = setting_projectors(sc.setting);
        for (int i = 0; i < 4; ++i) {
            if (sc.counts[static_cast<std::size_t>(i)] <= 0.0) continue;
            double p = std::max(outcome_probability(projs[static_cast<std::size_t>(i)], rho), 1e-300);
            ll += sc.counts[static_cast<std::size_t>(i)] * std::log(p);
        }
    }
    return ll;
}

Eigen::Matrix4cd r_operator(const CountsTable& counts, const Eigen::Matrix4cd& rho, double total) {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    for (const SettingCounts& sc : counts) {
        const auto projs = setting_projectors(sc.setting);
        for (int i = 0; i < 4; ++i) {
            const double n = sc.counts[static_cast<std::size_t>(i)];
            if (n <= 0.0) continue;
            double p = std::max(outcome_probability(projs[static_cast<std::size_t>(i)], rho), 1e-300);
            r += (n / p) * projs[static_cast<std::size_t>(i)];
        }
    }
    return r / total;
}

Eigen::Matrix4cd normalized_conjugation(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd out = m * rho * m.adjoint();
    out /= out.trace().real();
    return 0.5 * (out + out.adjoint());
}

void check_complete(const std::vector<TomoSetting>& settings, const char* who) {
    if (!settings_complete(settings))
        throw std::invalid_argument(std::string(who) + ": settings do not determine the state");
}

std::vector<TomoSetting> table_settings(const CountsTable& counts) {
    std::vector<TomoSetting> s;
    s.reserve(counts.size());
    for (const SettingCounts& sc : counts) s.push_back(sc.setting);
    return s;
}

}  // namespace

DensityMatrix::DensityMatrix(const Eigen::Matrix4cd& m) : mat(m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e-9 || std::abs(m.trace().imag()) > 1e-9)
        throw std::invalid_argument("DensityMatrix: trace != 1");
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector4cd& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("DensityMatrix::pure: state not normalized");
    return DensityMatrix(psi * psi.adjoint());
}

bool DensityMatrix::is_physical(double tol) const {
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(mat.trace().real() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(mat);
    return es.eigenvalues().minCoeff() > -tol;
}

Eigen::Vector2cd proj_vector(Proj p) {
    switch (p) {
        case Proj::H: return {1.0, 0.0};
        case Proj::V: return {0.0, 1.0};
        case Proj::D: return {kInvSqrt2, kInvSqrt2};
        case Proj::A: return {kInvSqrt2, -kInvSqrt2};
        case Proj::R: return {kInvSqrt2, cx(0.0, kInvSqrt2)};
        case Proj::L: return {kInvSqrt2, cx(0.0, -kInvSqrt2)};
    }
    throw std::invalid_argument("proj_vector: unknown projector");
}

Proj proj_orthogonal(Proj p) {
    switch (p) {
        case Proj::H: return Proj::V;
        case Proj::V: return Proj::H;
        case Proj::D: return Proj::A;
        case Proj::A: return Proj::D;
        case Proj::R: return Proj::L;
        case Proj::L: return Proj::R;
    }
    throw std::invalid_argument("proj_orthogonal: unknown projector");
}

char proj_char(Proj p) {
    switch (p) {
        case Proj::H: return 'H';
        case Proj::V: return 'V';
        case Proj::D: return 'D';
        case Proj::A: return 'A';
        case Proj::R: return 'R';
        case Proj::L: return 'L';
    }
    throw std::invalid_argument("proj_char: unknown projector");
}

Proj proj_from_char(char c) {
    switch (c) {
        case 'H': return Proj::H;
        case 'V': return Proj::V;
        case 'D': return Proj::D;
        case 'A': return Proj::A;
        case 'R': return Proj::R;
        case 'L': return Proj::L;
        default: throw std::invalid_argument(std::string("proj_from_char: unknown projector '") + c + "'");
    }
}

std::array<Eigen::Matrix4cd, 4> setting_projectors(const TomoSetting& s) {
    const std::array<Proj, 2> p1 = {s.photon1, proj_orthogonal(s.photon1)};
    const std::array<Proj, 2> p2 = {s.photon2, proj_orthogonal(s.photon2)};
    std::array<Eigen::Matrix4cd, 4> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Eigen::Vector2cd va = proj_vector(p1[static_cast<std::size_t>(a)]);
            Eigen::Vector2cd vb = proj_vector(p2[static_cast<std::size_t>(b)]);
            out[static_cast<std::size_t>(2 * a + b)] =
                kron2(va * va.adjoint(), vb * vb.adjoint());
        }
    return out;
}

std::array<std::string, 4> setting_outcome_names(const TomoSetting& s) {
    const std::array<Proj, 2> p1 = {s.photon1, proj_orthogonal(s.photon1)};
    const std::array<Proj, 2> p2 = {s.photon2, proj_orthogonal(s.photon2)};
    std::array<std::string, 4> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out[static_cast<std::size_t>(2 * a + b)] = {proj_char(p1[static_cast<std::size_t>(a)]),
                                                        proj_char(p2[static_cast<std::size_t>(b)])};
    return out;
}

std::vector<TomoSetting> overcomplete_settings() {
    const std::array<Proj, 6> all = {Proj::H, Proj::V, Proj::D, Proj::A, Proj::R, Proj::L};
    std::vector<TomoSetting> out;
    out.reserve(36);
    for (Proj a : all)
        for (Proj b : all) out.push_back({a, b});
    return out;
}

std::vector<TomoSetting> minimal_settings() {
    const std::array<Proj, 4> all = {Proj::H, Proj::V, Proj::D, Proj::R};
    std::vector<TomoSetting> out;
    out.reserve(16);
    for (Proj a : all)
        for (Proj b : all) out.push_back({a, b});
    return out;
}

bool settings_complete(const std::vector<TomoSetting>& settings) {
    if (settings.empty()) return false;
    Eigen::MatrixXd m = design_matrix(pooled_projectors(settings));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-9);
    return qr.rank() == 16;
}

CountsTable exact_counts(const DensityMatrix& rho, const std::vector<TomoSetting>& settings,
                         double shots_per_setting) {
    if (shots_per_setting <= 0.0) throw std::invalid_argument("exact_counts: shots must be positive");
    CountsTable table;
    table.reserve(settings.size());
    for (const TomoSetting& s : settings) {
        SettingCounts sc{s, {}};
        const auto projs = setting_projectors(s);
        for (int i = 0; i < 4; ++i)
            sc.counts[static_cast<std::size_t>(i)] =
                shots_per_setting * std::max(outcome_probability(projs[static_cast<std::size_t>(i)], rho.mat), 0.0);
        table.push_back(sc);
    }
    return table;
}

CountsTable simulate_counts(const DensityMatrix& rho, const std::vector<TomoSetting>& settings,
                            std::int64_t shots_per_setting, std::uint64_t seed) {
    if (shots_per_setting <= 0) throw std::invalid_argument("simulate_counts: shots must be positive");
    CountsTable table;
    table.reserve(settings.size());
    for (std::size_t idx = 0; idx < settings.size(); ++idx) {
        const auto projs = setting_projectors(settings[idx]);
        std::vector<double> p(4);
        for (int i = 0; i < 4; ++i) {
            p[static_cast<std::size_t>(i)] = outcome_probability(projs[static_cast<std::size_t>(i)], rho.mat);
            if (p[static_cast<std::size_t>(i)] < -1e-9)
                throw std::invalid_argument("simulate_counts: state gives a negative probability");
            p[static_cast<std::size_t>(i)] = std::max(p[static_cast<std::size_t>(i)], 0.0);
        }
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(idx)));
        const std::vector<std::int64_t> n = sample_counts(p, shots_per_setting, rng);
        SettingCounts sc{settings[idx], {}};
        for (int i = 0; i < 4; ++i)
            sc.counts[static_cast<std::size_t>(i)] = static_cast<double>(n[static_cast<std::size_t>(i)]);
        table.push_back(sc);
    }
    return table;
}

DensityMatrix linear_inversion(const CountsTable& counts) {
    check_complete(table_settings(counts), "linear_inversion");
    std::vector<Eigen::Matrix4cd> projs;
    std::vector<double> freqs;
    for (const SettingCounts& sc : counts) {
        const double total = sc.counts[0] + sc.counts[1] + sc.counts[2] + sc.counts[3];
        if (total <= 0.0) throw std::invalid_argument("linear_inversion: empty setting");
        const auto sp = setting_projectors(sc.setting);
        for (int i = 0; i < 4; ++i) {
            projs.push_back(sp[static_cast<std::size_t>(i)]);
            freqs.push_back(sc.counts[static_cast<std::size_t>(i)] / total);
        }
    }
    Eigen::MatrixXd m = design_matrix(projs);
    Eigen::VectorXd f = Eigen::Map<Eigen::VectorXd>(freqs.data(), static_cast<Eigen::Index>(freqs.size()));
    Eigen::VectorXd c = m.colPivHouseholderQr().solve(f);
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const auto& basis = hermitian_basis();
    for (int k = 0; k < 16; ++k) rho += c[k] * basis[static_cast<std::size_t>(k)];
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-9) throw std::runtime_error("linear_inversion: fitted state has zero trace");
    rho /= tr;
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix project_to_physical(const DensityMatrix& rho, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho.mat + rho.mat.adjoint()));
    Eigen::Vector4d vals = es.eigenvalues().cwiseMax(floor);
    Eigen::Matrix4cd out =
        es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
    out /= out.trace().real();
    return DensityMatrix(0.5 * (out + out.adjoint()));
}

MleResult mle_reconstruct(const CountsTable& counts, const MleOptions& opts) {
    double total = 0.0;
    for (const SettingCounts& sc : counts)
        total += sc.counts[0] + sc.counts[1] + sc.counts[2] + sc.counts[3];
    if (total <= 0.0) throw std::invalid_argument("mle_reconstruct: no counts");

    MleResult res;
    Eigen::Matrix4cd rho = project_to_physical(linear_inversion(counts)).mat;
    double ll = log_likelihood(counts, rho);
    res.loglik_trace.push_back(ll);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        const Eigen::Matrix4cd r = r_operator(counts, rho, total);
        Eigen::Matrix4cd cand = normalized_conjugation(r, rho);
        double ll_cand = log_likelihood(counts, cand);
        if (ll_cand <= ll) {
            // Full step overshot; shrink toward the identity until monotone.
            double alpha = opts.dilution;
            bool improved = false;
            while (alpha > 1e-14) {
                const Eigen::Matrix4cd step =
                    (Eigen::Matrix4cd::Identity() + alpha * r) / (1.0 + alpha);
                cand = normalized_conjugation(step, rho);
                ll_cand = log_likelihood(counts, cand);
                if (ll_cand > ll) {
                    improved = true;
                    break;
                }
                alpha *= opts.dilution;
            }
            if (!improved) {
                res.converged = true;
                break;
            }
        }
        rho = cand;
        res.iterations = iter + 1;
        res.loglik_trace.push_back(ll_cand);
        if (ll_cand - ll < opts.loglik_tol) {
            ll = ll_cand;
            res.converged = true;
            break;
        }
        ll = ll_cand;
    }

    res.rho = project_to_physical(DensityMatrix(rho), 0.0);
    res.final_loglik = log_likelihood(counts, res.rho.mat);
    return res;
}

double fidelity(const DensityMatrix& rho, const Eigen::Vector4cd& target) {
    if (std::abs(target.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("fidelity: target not normalized");
    return (target.adjoint() * rho.mat * target)(0, 0).real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    Eigen::Matrix4cd diff = a.mat - b.mat;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (diff + diff.adjoint()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Eigen::Vector4cd bell_hv_plus() {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi[1] = kInvSqrt2;
    psi[2] = kInvSqrt2;
    return psi;
}

}  // namespace qpar
