#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpar/qudit.hpp"
#include "qpar/twophoton.hpp"

namespace qpar {

enum class Parity { Positive, Negative, Inconclusive };

const char* parity_name(Parity p);

// outcome_index is 1 exactly when positive, dim-1 exactly when negative, and
// the sentinel -1 whenever no legal outcome wins, so index and verdict can
// never disagree.
struct ParityOutcome {
    Parity parity = Parity::Inconclusive;
    int outcome_index = -1;
    double success_prob = 0.0;
};

// Majority rule over the two legal outcome indices {1, d-1}: the winner must
// hold at least `threshold` of the mass and strictly beat the other index.
ParityOutcome decide_parity(const MeasurementDistribution& dist, double threshold = 0.5);

// Black-box view of one hidden permutation. Every classical evaluation and
// every handed-out unitary costs one query; the speed-up claim is about this
// counter, not about shots.
class QueryOracle {
public:
    explicit QueryOracle(const PermutationSpec& spec) : spec_(spec) {}

    int evaluate(int x) {
        ++queries_;
        return spec_.evaluate(x);
    }
    UnitaryOp unitary() {
        ++queries_;
        return permutation_unitary(spec_);
    }
    std::int64_t query_count() const { return queries_; }

private:
    PermutationSpec spec_;
    std::int64_t queries_ = 0;
};

struct IdealRunResult {
    QuditState final_state;
    ParityOutcome outcome;
    std::int64_t queries_used = 0;
};

// Fourier transform, one oracle call, inverse Fourier transform, measure.
// Deterministic: the correct parity index carries all the probability.
IdealRunResult run_ideal(const PermutationSpec& spec);

struct WitnessPair {
    int x;           // queried input
    int y;           // observed answer
    int m_positive;  // (y - x) mod d reproduces the answer with positive sign
    int m_negative;  // (y + x) mod d reproduces it with negative sign
};

struct CertificateReport {
    int d = 0;
    std::int64_t strategies_enumerated = 0;     // d * 2^d deterministic strategies
    double best_one_query_worst_case = 0.0;     // optimum including randomized play
    double best_deterministic_worst_case = 0.0;
    double best_one_query_average = 0.0;
    double two_query_success = 0.0;
    int quantum_queries = 1;
    int classical_queries_needed = 2;
    std::vector<WitnessPair> witness_pairs;     // one per (x, y), d*d total
    std::string notes;
};

// Brute force over every deterministic one-query strategy (pick x, then any
// answer->parity rule). Every strategy averages exactly 1/2 and has a
// permutation it always misclassifies; the witness pairs show each possible
// answer is parity-ambiguous, which caps even coin-flipping strategies at
// worst-case 1/2. A fixed two-query rule then reaches success 1.
CertificateReport classical_one_query_lower_bound(int d);

struct NoisyRunResult {
    MeasurementDistribution dist;  // empirical outcome frequencies
    ParityOutcome outcome;
    CoincidenceRecord record;
};

// Hardware-model run at d=4: samples the photonic pipeline and applies the
// majority rule to the empirical distribution.
NoisyRunResult run_noisy(const PermutationSpec& spec, const NoiseParams& noise, std::int64_t shots,
                         std::uint64_t seed);

}  // namespace qpar
