#include "qpar/qudit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qpar/random.hpp"

namespace qpar {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

bool is_power_of_two(int d) { return d >= 1 && (d & (d - 1)) == 0; }
}  // namespace

char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

Sign sign_from_string(const std::string& s) {
    if (s == "+" || s == "positive" || s == "plus") return Sign::Plus;
    if (s == "-" || s == "negative" || s == "minus") return Sign::Minus;
    throw std::invalid_argument("unrecognized sign '" + s + "' (use + or -)");
}

PermutationSpec::PermutationSpec(int m_, Sign sign_, int dim_) : m(m_), sign(sign_), dim(dim_) {
    if (dim == 2)
        throw std::domain_error(
            "dim=2 rejected: both signs give the same permutation, so parity is undefined");
    if (dim < 3) throw std::invalid_argument("PermutationSpec: dim must be >= 3");
    if (m < 0 || m >= dim) throw std::invalid_argument("PermutationSpec: m must lie in [0, dim)");
}

int PermutationSpec::evaluate(int x) const {
    if (x < 0 || x >= dim) throw std::invalid_argument("PermutationSpec::evaluate: x out of range");
    int y = sign == Sign::Plus ? (m + x) % dim : (m - x) % dim;
    return y < 0 ? y + dim : y;
}

QuditState::QuditState(int dim_, Eigen::VectorXcd amps_) : dim(dim_), amps(std::move(amps_)) {
    if (dim < 2) throw std::invalid_argument("QuditState: dim must be >= 2");
    if (amps.size() != dim) throw std::invalid_argument("QuditState: amplitude count != dim");
    if (std::abs(amps.squaredNorm() - 1.0) > kMatrixTol)
        throw std::invalid_argument("QuditState: amplitudes not normalized");
}

QuditState QuditState::basis(int dim, int index) {
    if (index < 0 || index >= dim) throw std::invalid_argument("QuditState::basis: index out of range");
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);
    a[index] = 1.0;
    return QuditState(dim, std::move(a));
}

QuditState QuditState::normalized(Eigen::VectorXcd amps) {
    double n = amps.norm();
    if (n == 0.0) throw std::invalid_argument("QuditState::normalized: zero vector");
    return QuditState(static_cast<int>(amps.size()), amps / n);
}

UnitaryOp::UnitaryOp(int dim_, Eigen::MatrixXcd mat_) : dim(dim_), mat(std::move(mat_)) {
    if (dim < 1) throw std::invalid_argument("UnitaryOp: dim must be positive");
    if (mat.rows() != dim || mat.cols() != dim)
        throw std::invalid_argument("UnitaryOp: matrix shape != dim x dim");
}

bool UnitaryOp::is_unitary(double tol) const {
    Eigen::MatrixXcd g = mat.adjoint() * mat - Eigen::MatrixXcd::Identity(dim, dim);
    return g.cwiseAbs().maxCoeff() <= tol;
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(dim, mat.adjoint()); }

MeasurementDistribution::MeasurementDistribution(int dim_, Eigen::VectorXd probs_)
    : dim(dim_), probs(std::move(probs_)) {
    if (probs.size() != dim) throw std::invalid_argument("MeasurementDistribution: size != dim");
    if (probs.minCoeff() < -1e-12)
        throw std::invalid_argument("MeasurementDistribution: negative probability");
    probs = probs.cwiseMax(0.0);
    if (std::abs(probs.sum() - 1.0) > kMatrixTol)
        throw std::invalid_argument("MeasurementDistribution: probabilities do not sum to 1");
}

UnitaryOp qft(int d) {
    if (d < 2) throw std::invalid_argument("qft: dimension must be >= 2");
    Eigen::MatrixXcd f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
            f(k, j) = std::polar(scale, 2.0 * kPi * static_cast<double>(j) * k / d);
    return UnitaryOp(d, std::move(f));
}

UnitaryOp inverse_qft(int d) { return qft(d).adjoint(); }

UnitaryOp permutation_unitary(const PermutationSpec& spec) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(spec.dim, spec.dim);
    for (int j = 0; j < spec.dim; ++j) p(spec.evaluate(j), j) = 1.0;
    return UnitaryOp(spec.dim, std::move(p));
}

QuditState apply(const UnitaryOp& u, const QuditState& s) {
    if (u.dim != s.dim) throw std::invalid_argument("apply: dimension mismatch");
    return QuditState(s.dim, u.mat * s.amps);
}

MeasurementDistribution measure_distribution(const QuditState& s) {
    return MeasurementDistribution(s.dim, s.amps.cwiseAbs2());
}

std::vector<int> qudit_index_to_bits(int index, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("qudit_index_to_bits: bad qubit count");
    if (index < 0 || index >= (1 << n_qubits))
        throw std::invalid_argument("qudit_index_to_bits: index out of range");
    std::vector<int> bits(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) bits[static_cast<std::size_t>(q)] = (index >> (n_qubits - 1 - q)) & 1;
    return bits;
}

int bits_to_qudit_index(const std::vector<int>& bits) {
    if (bits.empty() || bits.size() > 30) throw std::invalid_argument("bits_to_qudit_index: bad bit count");
    int index = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("bits_to_qudit_index: entries must be 0/1");
        index = (index << 1) | b;
    }
    return index;
}

namespace {

// One readout stage: Fourier-rotate the current most-significant qubit and
// split the register into the two unnormalized post-measurement branches.
// After a "1" result the survivors pick up the feed-forward phase
// e^{-2 pi i j / span}, which factors into one phase rotation per remaining
// qubit.
void stage_branches(const Eigen::VectorXcd& work, Eigen::VectorXcd& plus, Eigen::VectorXcd& minus) {
    const int span = static_cast<int>(work.size());
    const int half = span / 2;
    plus.resize(half);
    minus.resize(half);
    for (int j = 0; j < half; ++j) {
        plus[j] = (work[j] + work[j + half]) * kInvSqrt2;
        minus[j] = (work[j] - work[j + half]) * kInvSqrt2 *
                   std::polar(1.0, -2.0 * kPi * static_cast<double>(j) / span);
    }
}

void require_semiclassical_dim(int d) {
    if (!is_power_of_two(d) || d < 2)
        throw std::invalid_argument("semiclassical readout requires a power-of-two dimension");
}

}  // namespace

SemiclassicalResult semiclassical_iqft_measure(const QuditState& s, std::uint64_t rng_seed) {
    require_semiclassical_dim(s.dim);
    Rng rng(rng_seed);
    Eigen::VectorXcd work = s.amps;
    SemiclassicalResult result{0, {}};
    int stage = 0;
    while (work.size() > 1) {
        Eigen::VectorXcd plus, minus;
        stage_branches(work, plus, minus);
        const double p0 = plus.squaredNorm();
        const double p1 = minus.squaredNorm();
        const int bit = rng.uniform() * (p0 + p1) < p0 ? 0 : 1;
        work = bit == 0 ? plus / std::sqrt(p0) : minus / std::sqrt(p1);
        result.outcome |= bit << stage;
        result.bit_record.push_back(bit);
        ++stage;
    }
    return result;
}

MeasurementDistribution semiclassical_iqft_distribution(const QuditState& s) {
    require_semiclassical_dim(s.dim);
    // Unnormalized branch vectors indexed by the outcome bits gathered so
    // far (LSB first); a leaf's squared magnitude is its path probability.
    std::vector<Eigen::VectorXcd> branches{s.amps};
    while (branches.front().size() > 1) {
        std::vector<Eigen::VectorXcd> next(branches.size() * 2);
        for (std::size_t i = 0; i < branches.size(); ++i) {
            Eigen::VectorXcd plus, minus;
            stage_branches(branches[i], plus, minus);
            next[i] = std::move(plus);
            next[i + branches.size()] = std::move(minus);
        }
        branches = std::move(next);
    }
    Eigen::VectorXd probs(s.dim);
    for (int k = 0; k < s.dim; ++k) probs[k] = std::norm(branches[static_cast<std::size_t>(k)][0]);
    return MeasurementDistribution(s.dim, std::move(probs));
}

bool states_close(const QuditState& a, const QuditState& b, double tol) {
    if (a.dim != b.dim) return false;
    return (a.amps - b.amps).cwiseAbs().maxCoeff() <= tol;
}

bool states_close_up_to_phase(const QuditState& a, const QuditState& b, double tol) {
    if (a.dim != b.dim) return false;
    cx overlap = b.amps.dot(a.amps);  // <b|a>
    if (std::abs(overlap) < tol) return false;
    cx phase = overlap / std::abs(overlap);
    return (a.amps - phase * b.amps).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qpar
