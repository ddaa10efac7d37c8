#include "qpar/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpar {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

Eigen::Matrix2cd rotation_cw(double theta_rad) {
    Eigen::Matrix2cd r;
    r << std::cos(theta_rad), std::sin(theta_rad), -std::sin(theta_rad), std::cos(theta_rad);
    return r;
}

void check_mode(const ModeNetwork& net, int mode, const char* what) {
    if (mode < 0 || mode >= net.n_spatial)
        throw std::invalid_argument(std::string(what) + ": mode index outside the declared ladder");
}

Eigen::MatrixXcd element_matrix(const ModeNetwork& net, const JonesElement& e) {
    const int rails = net.rail_count();
    Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(rails, rails);
    switch (e.kind) {
        case ElementKind::HWP:
        case ElementKind::QWP: {
            check_mode(net, e.mode, "wave plate");
            Eigen::Matrix2cd j = e.kind == ElementKind::HWP ? hwp_matrix(e.theta_deg)
                                                            : qwp_matrix(e.theta_deg);
            step.block<2, 2>(ModeNetwork::rail(e.mode, Pol::H), ModeNetwork::rail(e.mode, Pol::H)) = j;
            break;
        }
        case ElementKind::Phase: {
            check_mode(net, e.mode, "phase element");
            cx ph = std::polar(1.0, deg2rad(e.theta_deg));
            step(ModeNetwork::rail(e.mode, Pol::H), ModeNetwork::rail(e.mode, Pol::H)) = ph;
            step(ModeNetwork::rail(e.mode, Pol::V), ModeNetwork::rail(e.mode, Pol::V)) = ph;
            break;
        }
        case ElementKind::PBS: {
            // H transmits, V hops between the two ports.
            check_mode(net, e.mode, "PBS");
            if (e.mode + 1 >= net.n_spatial)
                throw std::invalid_argument("PBS: needs two adjacent spatial modes");
            const int va = ModeNetwork::rail(e.mode, Pol::V);
            const int vb = ModeNetwork::rail(e.mode + 1, Pol::V);
            step(va, va) = 0.0;
            step(vb, vb) = 0.0;
            step(va, vb) = 1.0;
            step(vb, va) = 1.0;
            break;
        }
        case ElementKind::BD: {
            if (net.n_spatial < 2)
                throw std::invalid_argument("BD: nowhere to displace with a single spatial mode");
            // Cyclic shift of the walked-polarization rails keeps the
            // transform unitary; the checked compile overload rejects
            // networks that would actually populate the wrap-around rail.
            step.setZero();
            for (int m = 0; m < net.n_spatial; ++m) {
                const int src_h = ModeNetwork::rail(m, kDisplacedPol);
                const int dst_h = ModeNetwork::rail((m + 1) % net.n_spatial, kDisplacedPol);
                const Pol straight = kDisplacedPol == Pol::H ? Pol::V : Pol::H;
                step(dst_h, src_h) = 1.0;
                step(ModeNetwork::rail(m, straight), ModeNetwork::rail(m, straight)) = 1.0;
            }
            break;
        }
    }
    return step;
}

}  // namespace

Eigen::Matrix2cd hwp_matrix(double theta_deg) {
    const double t = 2.0 * deg2rad(theta_deg);
    Eigen::Matrix2cd m;
    m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    return m;
}

Eigen::Matrix2cd qwp_matrix(double theta_deg) {
    const double t = deg2rad(theta_deg);
    Eigen::Matrix2cd retarder = Eigen::Matrix2cd::Zero();
    retarder(0, 0) = 1.0;
    retarder(1, 1) = cx(0.0, 1.0);
    return rotation_cw(t) * retarder * rotation_cw(-t);
}

UnitaryOp compile_network(const ModeNetwork& net) {
    if (net.n_spatial < 1) throw std::invalid_argument("compile_network: no spatial modes");
    const int rails = net.rail_count();
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(rails, rails);
    for (const JonesElement& e : net.elements) total = element_matrix(net, e) * total;
    UnitaryOp op(rails, std::move(total));
    if (!op.is_unitary()) throw std::runtime_error("compile_network: compiled transform not unitary");
    return op;
}

UnitaryOp compile_network(const ModeNetwork& net, const std::vector<int>& input_rails) {
    if (net.n_spatial < 1) throw std::invalid_argument("compile_network: no spatial modes");
    std::vector<bool> live(static_cast<std::size_t>(net.rail_count()), false);
    for (int r : input_rails) {
        if (r < 0 || r >= net.rail_count())
            throw std::invalid_argument("compile_network: input rail out of range");
        live[static_cast<std::size_t>(r)] = true;
    }
    auto is_live = [&](int mode, Pol p) { return live[static_cast<std::size_t>(ModeNetwork::rail(mode, p))]; };
    auto set_live = [&](int mode, Pol p, bool v) { live[static_cast<std::size_t>(ModeNetwork::rail(mode, p))] = v; };
    for (const JonesElement& e : net.elements) {
        switch (e.kind) {
            case ElementKind::HWP:
            case ElementKind::QWP: {
                check_mode(net, e.mode, "wave plate");
                if (is_live(e.mode, Pol::H) || is_live(e.mode, Pol::V)) {
                    set_live(e.mode, Pol::H, true);
                    set_live(e.mode, Pol::V, true);
                }
                break;
            }
            case ElementKind::Phase:
                check_mode(net, e.mode, "phase element");
                break;
            case ElementKind::PBS: {
                check_mode(net, e.mode, "PBS");
                if (e.mode + 1 >= net.n_spatial)
                    throw std::invalid_argument("PBS: needs two adjacent spatial modes");
                bool va = is_live(e.mode, Pol::V);
                bool vb = is_live(e.mode + 1, Pol::V);
                set_live(e.mode, Pol::V, vb);
                set_live(e.mode + 1, Pol::V, va);
                break;
            }
            case ElementKind::BD: {
                if (net.n_spatial < 2)
                    throw std::invalid_argument("BD: nowhere to displace with a single spatial mode");
                if (is_live(net.n_spatial - 1, kDisplacedPol))
                    throw std::invalid_argument(
                        "BD: would displace an occupied rail past the last spatial mode");
                for (int m = net.n_spatial - 1; m > 0; --m)
                    set_live(m, kDisplacedPol, is_live(m - 1, kDisplacedPol));
                set_live(0, kDisplacedPol, false);
                break;
            }
        }
    }
    return compile_network(net);
}

StatePrepSettings fourier_state_prep_settings() { return {-22.5, 67.5, 0.0}; }

ModeNetwork fourier_state_prep_network() {
    const StatePrepSettings s = fourier_state_prep_settings();
    ModeNetwork net;
    net.n_spatial = 2;
    net.elements = {
        {ElementKind::HWP, s.photon1_hwp_deg, 0},
        {ElementKind::HWP, s.photon2_hwp_deg, 1},
        {ElementKind::QWP, s.photon2_qwp_deg, 1},
    };
    return net;
}

namespace {
Eigen::Vector2cd propagate_prepared(int mode, Pol input_pol) {
    const ModeNetwork net = fourier_state_prep_network();
    const UnitaryOp u = compile_network(net, {ModeNetwork::rail(mode, input_pol)});
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(net.rail_count());
    in[ModeNetwork::rail(mode, input_pol)] = 1.0;
    Eigen::VectorXcd out = u.mat * in;
    Eigen::Vector2cd jones;
    jones << out[ModeNetwork::rail(mode, Pol::H)], out[ModeNetwork::rail(mode, Pol::V)];
    // wave plates keep each photon in its own mode here
    if (std::abs(jones.squaredNorm() - 1.0) > kMatrixTol)
        throw std::runtime_error("state preparation leaked amplitude out of the photon's mode");
    return jones;
}
}  // namespace

Eigen::Vector2cd prepared_photon1_jones() { return propagate_prepared(0, Pol::H); }

Eigen::Vector2cd prepared_photon2_jones() { return propagate_prepared(1, Pol::V); }

}  // namespace qpar
