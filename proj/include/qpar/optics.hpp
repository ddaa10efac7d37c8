#pragma once

// Jones-calculus model of polarization optics on a ladder of parallel
// spatial modes. Each spatial mode carries an (H, V) rail pair; wave plates
// act within a mode, beam displacers and polarizing beam splitters couple
// neighboring modes. Losses are not modeled; every compiled network is
// unitary on the full rail space, and imperfect interference enters through
// the two-photon layer's noise parameters instead.

#include <vector>

#include <Eigen/Dense>

#include "qpar/qudit.hpp"

namespace qpar {

enum class Pol { H = 0, V = 1 };

enum class ElementKind { HWP, QWP, PBS, BD, Phase };

/// Beam-displacer walk-off convention: H is displaced to the next spatial
/// mode up, V goes straight.
inline constexpr Pol kDisplacedPol = Pol::H;

struct JonesElement {
    ElementKind kind;
    double theta_deg = 0.0;  // fast axis for HWP/QWP, phase for Phase; ignored for PBS/BD
    int mode = 0;            // target mode for HWP/QWP/Phase, lower mode for PBS; ignored for BD
};

struct ModeNetwork {
    int n_spatial = 0;
    std::vector<JonesElement> elements;

    int rail_count() const { return 2 * n_spatial; }

    /// (spatial mode, polarization) -> contiguous rail index.
    static int rail(int mode, Pol p) { return 2 * mode + static_cast<int>(p); }
};

/// Half-wave plate with fast axis at theta (degrees), in the (H, V) basis:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]], zero global phase.
Eigen::Matrix2cd hwp_matrix(double theta_deg);

/// Quarter-wave plate with fast axis at theta (degrees); at theta = 0 it is
/// diag(1, i). The fast-axis angle is measured in the opposite rotational
/// sense to the half-wave plate's.
Eigen::Matrix2cd qwp_matrix(double theta_deg);

/// Product of per-element rail transforms, in declared order. The result is
/// unitary on the full rail space; a beam displacer's walked polarization
/// wraps from the top spatial mode to the bottom one, so networks must
/// declare enough modes that the top H rail is never populated at a BD.
UnitaryOp compile_network(const ModeNetwork& net);

/// As above, but additionally tracks which rails can carry amplitude given
/// the declared input rails and throws if a beam displacer would walk an
/// occupied rail past the last spatial mode.
UnitaryOp compile_network(const ModeNetwork& net, const std::vector<int>& input_rails);

/// Wave-plate settings for the state-preparation stage: photon 1 enters as
/// H in mode 0, photon 2 as V in mode 1, and they leave as the Jones vectors
/// (|H> - |V>)/sqrt(2) and (|H> + i|V>)/sqrt(2). Their product equals the
/// d = 4 Fourier transform of |1> under the binary encoding, so preparing
/// these two plates replaces a full Fourier-transform circuit.
struct StatePrepSettings {
    double photon1_hwp_deg;
    double photon2_hwp_deg;
    double photon2_qwp_deg;
};

StatePrepSettings fourier_state_prep_settings();

/// Two-mode network realizing fourier_state_prep_settings.
ModeNetwork fourier_state_prep_network();

/// Single-photon Jones vectors produced by the preparation stage, computed
/// by propagation through the network above.
Eigen::Vector2cd prepared_photon1_jones();
Eigen::Vector2cd prepared_photon2_jones();

}  // namespace qpar
