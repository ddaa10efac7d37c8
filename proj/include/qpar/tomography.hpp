#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpar/qudit.hpp"

namespace qpar {

// Two-photon polarization basis order: |HH>, |HV>, |VH>, |VV>.
// Photon 1 is the high bit, H = 0, V = 1, so index = 2*pol1 + pol2.
// This matches the qudit encoding used by the four-level algorithm.

struct DensityMatrix {
    Eigen::Matrix4cd mat;

    DensityMatrix() : mat(Eigen::Matrix4cd::Identity() / 4.0) {}
    // Requires Hermitian and unit trace within 1e-9.  Positivity is not
    // required here: linear inversion can produce indefinite estimates.
    explicit DensityMatrix(const Eigen::Matrix4cd& m);

    static DensityMatrix pure(const Eigen::Vector4cd& psi);

    bool is_physical(double tol = 1e-9) const;
};

// Single-photon analyzer projections. R = (|H> + i|V>)/sqrt2, L its conjugate.
enum class Proj { H, V, D, A, R, L };

Eigen::Vector2cd proj_vector(Proj p);
Proj proj_orthogonal(Proj p);
char proj_char(Proj p);
Proj proj_from_char(char c);

// One tomography setting = a projector per photon. Measuring a setting yields
// four outcomes from the two analyzer ports:
//   0:(w1,w2)  1:(w1,w2_perp)  2:(w1_perp,w2)  3:(w1_perp,w2_perp)
struct TomoSetting {
    Proj photon1;
    Proj photon2;
};

std::array<Eigen::Matrix4cd, 4> setting_projectors(const TomoSetting& s);
std::array<std::string, 4> setting_outcome_names(const TomoSetting& s);

// All 36 pairs over {H,V,D,A,R,L}; conditioning headroom for finite counts.
std::vector<TomoSetting> overcomplete_settings();
// The 16 pairs over {H,V,D,R}; smallest set this code treats as complete.
std::vector<TomoSetting> minimal_settings();

// True when the pooled projectors span the full 16-dimensional operator space.
bool settings_complete(const std::vector<TomoSetting>& settings);

struct SettingCounts {
    TomoSetting setting;
    std::array<double, 4> counts;  // real-valued so exact (infinite-shot) data fits
};

using CountsTable = std::vector<SettingCounts>;

// Expected counts shots*p per outcome, no rounding, no sampling noise.
CountsTable exact_counts(const DensityMatrix& rho, const std::vector<TomoSetting>& settings,
                         double shots_per_setting);

// Multinomial sampling per setting; stream split per setting index, so the
// table is a pure function of (rho, settings, shots, seed).
CountsTable simulate_counts(const DensityMatrix& rho, const std::vector<TomoSetting>& settings,
                            std::int64_t shots_per_setting, std::uint64_t seed);

// Least-squares fit of the Hermitian coefficient vector to the observed
// frequencies, rescaled to unit trace. May be indefinite.
DensityMatrix linear_inversion(const CountsTable& counts);

// Clamp eigenvalues at `floor` and renormalize. Used to seed the MLE.
DensityMatrix project_to_physical(const DensityMatrix& rho, double floor = 1e-12);

struct MleOptions {
    int max_iterations = 10000;
    double loglik_tol = 1e-10;   // stop when the improvement drops below this
    double dilution = 0.5;       // step-shrink factor applied on stagnation
};

struct MleResult {
    DensityMatrix rho;
    int iterations = 0;
    bool converged = false;
    double final_loglik = 0.0;
    std::vector<double> loglik_trace;  // one entry per accepted iterate
};

// Maximum-likelihood reconstruction by the diluted R-rho-R fixed point.
// The accepted log-likelihood sequence is non-decreasing by construction.
MleResult mle_reconstruct(const CountsTable& counts, const MleOptions& opts = {});

// <psi|rho|psi>; the squared-overlap convention for pure targets.
double fidelity(const DensityMatrix& rho, const Eigen::Vector4cd& target);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// (|HV> + |VH>)/sqrt2.
Eigen::Vector4cd bell_hv_plus();

}  // namespace qpar
