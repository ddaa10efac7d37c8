#include "qpar/twophoton.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpar/random.hpp"

namespace qpar {

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Vector4cd kron2v(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
    Eigen::Vector4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 * i + j] = a[i] * b[j];
    return out;
}

const Eigen::Matrix2cd& pauli_x() {
    static const Eigen::Matrix2cd x = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    return x;
}

// |q1 q2> -> |q1 ^ q2, q2>: the second (low) qubit controls the first.
Eigen::Matrix4cd cnot_low_controls_high() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

// |q1 q2> -> |q1, q2 ^ q1>: the first (high) qubit controls the second.
Eigen::Matrix4cd cnot_high_controls_low() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(3, 2) = 1;
    m(2, 3) = 1;
    return m;
}

void check_rail(const TwoPhotonState& s, int rail, const char* who) {
    if (rail < 0 || rail >= s.rail_count())
        throw std::invalid_argument(std::string(who) + ": rail index out of range");
}

Eigen::Vector4cd prepared_input_state() {
    return kron2v(prepared_photon1_jones(), prepared_photon2_jones());
}

void require_d4(const PermutationSpec& spec, const char* who) {
    if (spec.dim != 4)
        throw std::invalid_argument(std::string(who) + ": only the four-level circuit is wired up");
}

}  // namespace

TwoPhotonState::TwoPhotonState(Eigen::VectorXcd p1, Eigen::VectorXcd p2, cx overlap)
    : photon1(std::move(p1)), photon2(std::move(p2)), beta(overlap) {
    if (photon1.size() != photon2.size())
        throw std::invalid_argument("TwoPhotonState: photons live on different rail ladders");
    if (photon1.size() == 0) throw std::invalid_argument("TwoPhotonState: no rails");
    if (std::abs(photon1.squaredNorm() - 1.0) > kMatrixTol ||
        std::abs(photon2.squaredNorm() - 1.0) > kMatrixTol)
        throw std::invalid_argument("TwoPhotonState: photon amplitudes not normalized");
    if (std::abs(beta) > 1.0 + kMatrixTol)
        throw std::invalid_argument("TwoPhotonState: |overlap| exceeds 1");
}

TwoPhotonState evolve_two_photons(const UnitaryOp& u, const TwoPhotonState& in) {
    if (u.dim != in.rail_count())
        throw std::invalid_argument("evolve_two_photons: rail count mismatch");
    return TwoPhotonState(u.mat * in.photon1, u.mat * in.photon2, in.beta);
}

TwoPhotonState evolve_two_photons(const ModeNetwork& net, const TwoPhotonState& in) {
    return evolve_two_photons(compile_network(net), in);
}

double detection_probability(const TwoPhotonState& s, int rail_p, int rail_q) {
    check_rail(s, rail_p, "detection_probability");
    check_rail(s, rail_q, "detection_probability");
    const double b2 = std::norm(s.beta);
    const cx up = s.photon1[rail_p], uq = s.photon1[rail_q];
    const cx vp = s.photon2[rail_p], vq = s.photon2[rail_q];
    if (rail_p == rail_q) return (1.0 + b2) * std::norm(up * vp);
    return std::norm(up * vq) + std::norm(uq * vp) + 2.0 * b2 * (up * vq * std::conj(uq * vp)).real();
}

double total_detection_probability(const TwoPhotonState& s) {
    double total = 0.0;
    for (int p = 0; p < s.rail_count(); ++p)
        for (int q = p; q < s.rail_count(); ++q) total += detection_probability(s, p, q);
    return total;
}

ModeNetwork hom_network() {
    ModeNetwork net;
    net.n_spatial = 3;
    net.elements = {
        {ElementKind::BD, 0.0, 0},
        {ElementKind::HWP, 22.5, 1},
        {ElementKind::BD, 0.0, 0},
    };
    return net;
}

std::vector<HomPoint> hom_dip_scan(const std::vector<double>& delays, double coherence_time,
                                   double beta0) {
    if (coherence_time <= 0.0) throw std::invalid_argument("hom_dip_scan: coherence time must be positive");
    if (beta0 < 0.0 || beta0 > 1.0) throw std::invalid_argument("hom_dip_scan: beta0 outside [0,1]");
    const ModeNetwork net = hom_network();
    const int in1 = ModeNetwork::rail(0, Pol::H);
    const int in2 = ModeNetwork::rail(1, Pol::V);
    const UnitaryOp u = compile_network(net, {in1, in2});
    const int out1 = ModeNetwork::rail(2, Pol::H);
    const int out2 = ModeNetwork::rail(1, Pol::V);

    std::vector<HomPoint> points;
    points.reserve(delays.size());
    for (double tau : delays) {
        const double x = tau / coherence_time;
        const double beta = beta0 * std::exp(-x * x);
        Eigen::VectorXcd p1 = Eigen::VectorXcd::Zero(net.rail_count());
        Eigen::VectorXcd p2 = Eigen::VectorXcd::Zero(net.rail_count());
        p1[in1] = 1.0;
        p2[in2] = 1.0;
        const TwoPhotonState out = evolve_two_photons(u, TwoPhotonState(p1, p2, beta));
        points.push_back({tau, detection_probability(out, out1, out2)});
    }
    return points;
}

CircuitSettings permutation_circuit_settings(const PermutationSpec& spec) {
    require_d4(spec, "permutation_circuit_settings");
    const double cnot = kCnotPositionDeg;
    const double flip = kDoubleFlipPositionDeg;
    if (spec.positive()) {
        switch (spec.m) {
            case 0: return {flip, true, true};
            case 1: return {cnot, false, true};
            case 2: return {flip, false, true};
            case 3: return {cnot, true, true};
        }
    } else {
        switch (spec.m) {
            case 0: return {cnot, false, false};
            case 1: return {flip, true, false};
            case 2: return {cnot, true, false};
            case 3: return {flip, false, false};
        }
    }
    throw std::logic_error("permutation_circuit_settings: unreachable");
}

UnitaryOp logical_gate_for_settings(const CircuitSettings& s, double cnot_position_deg) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix4cd core;
    if (std::abs(s.hwp2_deg - kDoubleFlipPositionDeg) <= 1e-9)
        core = kron2(pauli_x(), pauli_x());
    else if (std::abs(s.hwp2_deg - cnot_position_deg) <= 1e-9)
        core = cnot_low_controls_high();
    else
        throw std::invalid_argument("logical_gate_for_settings: interior angle matches neither declared position");
    Eigen::Matrix4cd g = core;
    if (s.hwp5_present) g = kron2(id, pauli_x()) * g;
    if (s.hwp4_present) g = kron2(pauli_x(), id) * g;
    return UnitaryOp(4, g);
}

NoiseParams NoiseParams::calibrated() {
    NoiseParams n;
    n.beta = std::sqrt(kHomVisibilityRef);
    n.mz_dephasing = kMzVisibilityRef;
    n.readout_flip = 0.0;
    return n;
}

void NoiseParams::validate() const {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("NoiseParams: beta outside [0,1]");
    if (mz_dephasing < 0.0 || mz_dephasing > 1.0)
        throw std::invalid_argument("NoiseParams: mz_dephasing outside [0,1]");
    if (readout_flip < 0.0 || readout_flip > 1.0)
        throw std::invalid_argument("NoiseParams: readout_flip outside [0,1]");
}

DensityMatrix apply_gate_channel(const Eigen::Matrix4cd& gate, const DensityMatrix& rho,
                                 const NoiseParams& noise) {
    noise.validate();
    if ((gate.adjoint() * gate - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() > kMatrixTol)
        throw std::invalid_argument("apply_gate_channel: gate not unitary");
    const Eigen::Matrix4cd sigma = gate * rho.mat * gate.adjoint();
    const double b2 = noise.beta * noise.beta;
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            const int differing = std::popcount(static_cast<unsigned>(j ^ k));
            const double damp = std::pow(noise.mz_dephasing, differing);
            out(j, k) = b2 * damp * sigma(j, k);
            if (j == k) out(j, k) += (1.0 - b2) * sigma(j, k);
        }
    return DensityMatrix(out);
}

Eigen::Vector4d outcome_distribution(const DensityMatrix& rho_after_gate, const NoiseParams& noise) {
    noise.validate();
    const Eigen::Matrix4cd f = qft(4).mat;
    const Eigen::Matrix4cd readout = f.adjoint() * rho_after_gate.mat * f;
    Eigen::Vector4d p;
    for (int k = 0; k < 4; ++k) p[k] = std::max(readout(k, k).real(), 0.0);

    const double fl = noise.readout_flip;
    Eigen::Matrix2d flip;
    flip << 1.0 - fl, fl, fl, 1.0 - fl;
    Eigen::Vector4d mixed = Eigen::Vector4d::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) mixed[2 * a + b] += flip(a, c) * flip(b, d) * p[2 * c + d];
    return mixed;
}

const std::array<const char*, 4>& CoincidenceRecord::labels() {
    static const std::array<const char*, 4> names = {"HH", "HV", "VH", "VV"};
    return names;
}

CoincidenceRecord run_photonic_algorithm(const PermutationSpec& spec, const NoiseParams& noise,
                                         std::int64_t shots, std::uint64_t seed) {
    require_d4(spec, "run_photonic_algorithm");
    if (shots < 1) throw std::invalid_argument("run_photonic_algorithm: shots must be >= 1");
    const UnitaryOp gate = logical_gate_for_settings(permutation_circuit_settings(spec));
    const DensityMatrix rho =
        apply_gate_channel(gate.mat, DensityMatrix::pure(prepared_input_state()), noise);
    const Eigen::Vector4d p = outcome_distribution(rho, noise);

    Rng rng(seed);
    const std::vector<std::int64_t> n =
        sample_counts({p[0], p[1], p[2], p[3]}, shots, rng);
    CoincidenceRecord rec;
    for (int i = 0; i < 4; ++i) rec.counts[static_cast<std::size_t>(i)] = n[static_cast<std::size_t>(i)];
    rec.shots = shots;
    rec.seed = seed;
    return rec;
}

int correct_outcome_index(const PermutationSpec& spec) {
    return spec.positive() ? 1 : spec.dim - 1;
}

double success_probability(const PermutationSpec& spec, const NoiseParams& noise) {
    require_d4(spec, "success_probability");
    const UnitaryOp gate = logical_gate_for_settings(permutation_circuit_settings(spec));
    const DensityMatrix rho =
        apply_gate_channel(gate.mat, DensityMatrix::pure(prepared_input_state()), noise);
    return outcome_distribution(rho, noise)[correct_outcome_index(spec)];
}

DensityMatrix cnot_bell_test(const NoiseParams& noise) {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi[1] = std::numbers::sqrt2 / 2.0;  // |HV>
    psi[3] = std::numbers::sqrt2 / 2.0;  // |VV>
    return apply_gate_channel(cnot_high_controls_low(), DensityMatrix::pure(psi), noise);
}

Eigen::Matrix4cd bd_interferometer_gate_map(double hwp2_deg) {
    ModeNetwork net;
    net.n_spatial = 5;
    net.elements = {
        {ElementKind::BD, 0.0, 0},
        {ElementKind::HWP, hwp2_deg, 2},
        {ElementKind::BD, 0.0, 0},
    };
    const UnitaryOp u = compile_network(net);
    const auto in_rail = [](int mode, Pol p) { return ModeNetwork::rail(mode, p); };
    const auto arm_rail = [](int entry_mode, Pol p) {
        return p == Pol::H ? ModeNetwork::rail(entry_mode + 2, Pol::H)
                           : ModeNetwork::rail(entry_mode, Pol::V);
    };
    const std::array<Pol, 2> pols = {Pol::H, Pol::V};
    Eigen::Matrix4cd map;
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
            const Eigen::VectorXcd u1 = u.mat.col(in_rail(1, pols[static_cast<std::size_t>(b1)]));
            const Eigen::VectorXcd u2 = u.mat.col(in_rail(2, pols[static_cast<std::size_t>(b2)]));
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) {
                    const int r1 = arm_rail(1, pols[static_cast<std::size_t>(a1)]);
                    const int r2 = arm_rail(2, pols[static_cast<std::size_t>(a2)]);
                    map(2 * a1 + a2, 2 * b1 + b2) = u1[r1] * u2[r2] + u1[r2] * u2[r1];
                }
        }
    return map;
}

}  // namespace qpar
