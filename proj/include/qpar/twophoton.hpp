#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qpar/optics.hpp"
#include "qpar/qudit.hpp"
#include "qpar/tomography.hpp"

namespace qpar {

// Measured reference values the noise model is calibrated against.
inline constexpr double kHomVisibilityRef = 0.92459;
inline constexpr double kHomVisibilityTolRef = 0.00372;
inline constexpr double kMzVisibilityRef = 0.99691;
inline constexpr double kBellFidelityRef = 0.89180;
inline constexpr double kBellFidelityTolRef = 0.02987;
inline constexpr double kAverageSuccessRef = 0.93023;
inline constexpr double kAverageSuccessTolRef = 0.02015;

// Two photons in product form over the rail ladder. Internal wavepackets
// never mix with the rail degrees of freedom, so the overlap beta rides
// along unchanged; only |beta|^2 is observable.
struct TwoPhotonState {
    Eigen::VectorXcd photon1;
    Eigen::VectorXcd photon2;
    cx beta;

    TwoPhotonState(Eigen::VectorXcd p1, Eigen::VectorXcd p2, cx overlap);
    int rail_count() const { return static_cast<int>(photon1.size()); }
    cx amplitude(int rail_a, int rail_b) const { return photon1[rail_a] * photon2[rail_b]; }
};

TwoPhotonState evolve_two_photons(const UnitaryOp& u, const TwoPhotonState& in);
TwoPhotonState evolve_two_photons(const ModeNetwork& net, const TwoPhotonState& in);

// Probability of one detector firing at each rail of the unordered pair
// {rail_p, rail_q}. |beta|=1 is full bosonic interference, |beta|=0 the
// classical transfer rule.
double detection_probability(const TwoPhotonState& s, int rail_p, int rail_q);

// Sum over all unordered pairs (including p=q); 1 whenever the photons'
// rail vectors are orthogonal, e.g. whenever they entered distinct rails.
double total_detection_probability(const TwoPhotonState& s);

// Dip-characterization geometry: the two displacers bring the photons onto
// a shared rail pair with an interior half-wave plate at 22.5 degrees acting
// as the 50:50 splitter.
ModeNetwork hom_network();

struct HomPoint {
    double delay;
    double coincidence;
};

// beta(tau) = beta0 * exp(-(tau/tau_c)^2); visibility (P_inf - P_0)/P_inf
// equals beta0^2.
std::vector<HomPoint> hom_dip_scan(const std::vector<double>& delays, double coherence_time,
                                   double beta0 = 1.0);

// Wave-plate settings realizing the eight shift permutations at d=4:
// the interior angle selects the entangling submodule position, and the two
// removable output plates act as X gates on the individual photons.
struct CircuitSettings {
    double hwp2_deg;
    bool hwp4_present;  // X on the first (high-bit) photon when present
    bool hwp5_present;  // X on the second (low-bit) photon when present
};

inline constexpr double kCnotPositionDeg = 17.5;
inline constexpr double kDoubleFlipPositionDeg = 45.0;

CircuitSettings permutation_circuit_settings(const PermutationSpec& spec);

// The two-qubit map declared for each interior-angle position: 45 degrees is
// X on both qubits, the CNOT position flips the first qubit controlled on
// the second. Composition with the removable plates reproduces the shift
// permutation for every settings row.
UnitaryOp logical_gate_for_settings(const CircuitSettings& s,
                                    double cnot_position_deg = kCnotPositionDeg);

struct NoiseParams {
    double beta = 1.0;          // wavepacket overlap; HOM visibility is beta^2
    double mz_dephasing = 1.0;  // arm-coherence factor of each displacer pair
    double readout_flip = 0.0;  // per-photon misclassification probability

    static NoiseParams ideal() { return {}; }
    static NoiseParams calibrated();

    void validate() const;
};

// Gate channel: with probability beta^2 the coherent gate damped by the
// interferometer dephasing (off-diagonal (j,k) scaled by mz^(bits j^k)),
// with probability 1-beta^2 the interference-free channel, i.e. the gate
// output fully dephased in the polarization product basis.
DensityMatrix apply_gate_channel(const Eigen::Matrix4cd& gate, const DensityMatrix& rho,
                                 const NoiseParams& noise);

// Readout distribution: inverse Fourier transform of the state, measured in
// the polarization product basis, then a per-photon flip channel on the two
// outcome bits.
Eigen::Vector4d outcome_distribution(const DensityMatrix& rho_after_gate, const NoiseParams& noise);

struct CoincidenceRecord {
    std::array<std::int64_t, 4> counts{};  // order HH, HV, VH, VV
    std::int64_t shots = 0;
    std::uint64_t seed = 0;

    static const std::array<const char*, 4>& labels();
    std::int64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

// Full pipeline at d=4: product-state preparation, settings lookup, noisy
// gate channel, Fourier readout, sampled coincidences.
CoincidenceRecord run_photonic_algorithm(const PermutationSpec& spec, const NoiseParams& noise,
                                         std::int64_t shots, std::uint64_t seed);

// Outcome index announcing the right answer: 1 for positive parity, 3 for
// negative (the highest level).
int correct_outcome_index(const PermutationSpec& spec);

// Exact probability mass on the correct outcome under the noisy pipeline.
double success_probability(const PermutationSpec& spec, const NoiseParams& noise);

// Entanglement witness run: (|H> + |V>)|V>/sqrt2 through the noisy CNOT
// (first photon controlling the second for this preparation), returned as an
// exact density matrix. Ideal noise gives (|HV> + |VH>)/sqrt2.
DensityMatrix cnot_bell_test(const NoiseParams& noise);

// Exploratory only: compile the displacer-plate-displacer stage at an
// arbitrary interior angle with photons entering modes 1 and 2 of a
// five-mode ladder, and report the coincidence amplitude map onto the
// post-selected arms ((H, m+2), (V, m)) for a photon entering mode m,
// exchange term included at full overlap. Generally sub-unitary; reported,
// not asserted, as a gate.
Eigen::Matrix4cd bd_interferometer_gate_map(double hwp2_deg);

}  // namespace qpar
