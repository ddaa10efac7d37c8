#pragma once

// Exact dense linear algebra for d-level quantum systems: states, unitaries,
// the discrete Fourier transform, cyclic permutation operators,
// computational-basis measurement, the qudit <-> two-qubit binary encoding,
// and the semiclassical (measure-and-feed-forward) inverse Fourier readout.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpar {

using cx = std::complex<double>;

/// Tolerance for matrix/state identities. Double precision on d <= a few
/// hundred dense matrices leaves orders of magnitude of headroom.
inline constexpr double kMatrixTol = 1e-9;

enum class Sign { Plus, Minus };

char sign_char(Sign s);
Sign sign_from_string(const std::string& s);

/// Identifies one member f_m(x) = (m +/- x) mod d of the cyclic permutation
/// family on {0,...,d-1}. The sign is the permutation's parity. dim >= 3 is
/// required: at dim = 2 the two signs define the same permutation for every
/// m, so the parity label carries no information.
struct PermutationSpec {
    int m;
    Sign sign;
    int dim;

    PermutationSpec(int m_, Sign sign_, int dim_);

    /// Classical evaluation (m +/- x) mod dim.
    int evaluate(int x) const;

    bool positive() const { return sign == Sign::Plus; }
};

/// Pure state of a d-level system, stored as its amplitude vector.
/// Construction enforces normalization to kMatrixTol; use
/// QuditState::normalized to build from an arbitrary non-zero vector.
struct QuditState {
    int dim;
    Eigen::VectorXcd amps;

    QuditState(int dim_, Eigen::VectorXcd amps_);

    static QuditState basis(int dim, int index);
    static QuditState normalized(Eigen::VectorXcd amps);
};

struct UnitaryOp {
    int dim;
    Eigen::MatrixXcd mat;

    UnitaryOp(int dim_, Eigen::MatrixXcd mat_);

    bool is_unitary(double tol = kMatrixTol) const;
    UnitaryOp adjoint() const;
};

struct MeasurementDistribution {
    int dim;
    Eigen::VectorXd probs;  // entries clamped to >= 0, summing to 1

    MeasurementDistribution(int dim_, Eigen::VectorXd probs_);
};

/// d x d Fourier transform with entry (k, j) = exp(+2*pi*i*j*k/d)/sqrt(d).
/// With this sign convention, qft(d) applied to |1> produces the phase-ramp
/// state (1/sqrt(d)) sum_k e^{2 pi i k/d} |k>.
UnitaryOp qft(int d);

/// Conjugate transpose of qft(d).
UnitaryOp inverse_qft(int d);

/// Permutation operator: column j carries a single 1 at row (m +/- j) mod d.
UnitaryOp permutation_unitary(const PermutationSpec& spec);

QuditState apply(const UnitaryOp& u, const QuditState& s);

MeasurementDistribution measure_distribution(const QuditState& s);

/// Binary encoding shared by every module: the FIRST qubit is the most
/// significant bit, so |2> = |1>|0> for two qubits.
std::vector<int> qudit_index_to_bits(int index, int n_qubits);
int bits_to_qudit_index(const std::vector<int>& bits);

struct SemiclassicalResult {
    int outcome;
    std::vector<int> bit_record;  // measured bits, outcome LSB first
};

/// One sample of the measure-and-feed-forward inverse-Fourier readout:
/// each stage applies a single-qubit Fourier rotation to the current
/// most-significant qubit, measures it, and conditions single-qubit phase
/// rotations on the remaining register on the classical result. The induced
/// outcome distribution equals measure_distribution(apply(inverse_qft(d), s))
/// exactly. Requires d to be a power of two.
SemiclassicalResult semiclassical_iqft_measure(const QuditState& s, std::uint64_t rng_seed);

/// Exact outcome distribution of the protocol above, computed by enumerating
/// every measurement branch (no Fourier matrix involved).
MeasurementDistribution semiclassical_iqft_distribution(const QuditState& s);

/// Exact amplitude-level comparison.
bool states_close(const QuditState& a, const QuditState& b, double tol = kMatrixTol);

/// Comparison up to a global phase (the default notion of state equality).
bool states_close_up_to_phase(const QuditState& a, const QuditState& b, double tol = kMatrixTol);

}  // namespace qpar
