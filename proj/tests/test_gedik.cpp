#include "qpar/gedik.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qpar/random.hpp"

namespace qpar {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(DecideParityTest, CleanDistributionsDecide) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(4);
    p[1] = 1.0;
    ParityOutcome pos = decide_parity(MeasurementDistribution(4, p));
    EXPECT_EQ(pos.parity, Parity::Positive);
    EXPECT_EQ(pos.outcome_index, 1);
    EXPECT_DOUBLE_EQ(pos.success_prob, 1.0);

    p.setZero();
    p[3] = 1.0;
    ParityOutcome neg = decide_parity(MeasurementDistribution(4, p));
    EXPECT_EQ(neg.parity, Parity::Negative);
    EXPECT_EQ(neg.outcome_index, 3);
}

TEST(DecideParityTest, TieAndLowMassAreInconclusive) {
    Eigen::VectorXd tie = Eigen::VectorXd::Zero(4);
    tie[1] = 0.5;
    tie[3] = 0.5;
    ParityOutcome t = decide_parity(MeasurementDistribution(4, tie));
    EXPECT_EQ(t.parity, Parity::Inconclusive);
    EXPECT_EQ(t.outcome_index, -1);
    EXPECT_DOUBLE_EQ(t.success_prob, 0.5);

    Eigen::VectorXd low(4);
    low << 0.4, 0.3, 0.3, 0.0;
    ParityOutcome l = decide_parity(MeasurementDistribution(4, low));
    EXPECT_EQ(l.parity, Parity::Inconclusive);
    EXPECT_EQ(l.outcome_index, -1);
    EXPECT_DOUBLE_EQ(l.success_prob, 0.3);

    // A strict winner below the requested threshold stays inconclusive.
    Eigen::VectorXd strict(4);
    strict << 0.0, 0.45, 0.25, 0.3;
    EXPECT_EQ(decide_parity(MeasurementDistribution(4, strict)).parity, Parity::Inconclusive);
    EXPECT_EQ(decide_parity(MeasurementDistribution(4, strict), 0.4).parity, Parity::Positive);
}

TEST(DecideParityTest, IndexAndParityNeverDisagree) {
    Rng rng(2026);
    for (int rep = 0; rep < 500; ++rep) {
        Eigen::VectorXd p(4);
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            p[k] = rng.uniform();
            total += p[k];
        }
        p /= total;
        ParityOutcome o = decide_parity(MeasurementDistribution(4, p));
        switch (o.parity) {
            case Parity::Positive: EXPECT_EQ(o.outcome_index, 1); break;
            case Parity::Negative: EXPECT_EQ(o.outcome_index, 3); break;
            case Parity::Inconclusive: EXPECT_EQ(o.outcome_index, -1); break;
        }
        EXPECT_NEAR(o.success_prob, std::max(p[1], p[3]), 1e-12);
    }
}

TEST(QueryOracleTest, CountsEveryUse) {
    QueryOracle oracle(PermutationSpec(2, Sign::Minus, 5));
    EXPECT_EQ(oracle.query_count(), 0);
    EXPECT_EQ(oracle.evaluate(1), (2 - 1 + 5) % 5);
    EXPECT_EQ(oracle.query_count(), 1);
    oracle.unitary();
    EXPECT_EQ(oracle.query_count(), 2);
}

TEST(RunIdealTest, SingleQueryDeterministicForAllDimensionsAndSpecs) {
    for (int d = 3; d <= 12; ++d)
        for (int m = 0; m < d; ++m)
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                PermutationSpec spec(m, s, d);
                IdealRunResult res = run_ideal(spec);
                EXPECT_EQ(res.queries_used, 1);
                EXPECT_EQ(res.outcome.parity,
                          spec.positive() ? Parity::Positive : Parity::Negative);
                EXPECT_EQ(res.outcome.outcome_index, spec.positive() ? 1 : d - 1);
                EXPECT_NEAR(res.outcome.success_prob, 1.0, 1e-9);
            }
}

TEST(RunIdealTest, FinalStateCarriesTheClosedFormPhase) {
    for (int d = 3; d <= 12; ++d)
        for (int m = 0; m < d; ++m)
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                PermutationSpec spec(m, s, d);
                QuditState final_state = run_ideal(spec).final_state;
                int idx = spec.positive() ? 1 : d - 1;
                double arg = spec.positive() ? -2.0 * kPi * m / d : -2.0 * kPi * (d - 1) * m / d;
                EXPECT_LT(std::abs(final_state.amps[idx] - std::polar(1.0, arg)), 1e-9)
                    << "d=" << d << " m=" << m << " sign=" << sign_char(s);
            }
}

// Independent re-enumeration of every deterministic one-query strategy,
// written against the classical definition only (no library internals).
struct BruteForceResult {
    double best_worst = -1.0;
    double best_average = -1.0;
};

BruteForceResult brute_force_one_query(int d) {
    BruteForceResult out;
    for (int x = 0; x < d; ++x)
        for (std::uint64_t rule = 0; rule < (std::uint64_t{1} << d); ++rule) {
            int wins = 0;
            int worst = 1;
            for (int m = 0; m < d; ++m)
                for (Sign s : {Sign::Plus, Sign::Minus}) {
                    PermutationSpec spec(m, s, d);
                    int y = spec.evaluate(x);
                    bool guess_positive = ((rule >> y) & 1) != 0;
                    bool correct = guess_positive == spec.positive();
                    wins += correct ? 1 : 0;
                    worst = std::min(worst, correct ? 1 : 0);
                }
            out.best_worst = std::max(out.best_worst, double(worst));
            out.best_average = std::max(out.best_average, wins / double(2 * d));
        }
    return out;
}

TEST(LowerBoundTest, MatchesIndependentEnumeration) {
    for (int d : {3, 4, 5}) {
        CertificateReport report = classical_one_query_lower_bound(d);
        BruteForceResult brute = brute_force_one_query(d);
        EXPECT_EQ(report.d, d);
        EXPECT_EQ(report.strategies_enumerated, std::int64_t(d) << d);
        EXPECT_DOUBLE_EQ(report.best_deterministic_worst_case, brute.best_worst);
        EXPECT_DOUBLE_EQ(report.best_deterministic_worst_case, 0.0);
        EXPECT_DOUBLE_EQ(report.best_one_query_average, brute.best_average);
        EXPECT_DOUBLE_EQ(report.best_one_query_average, 0.5);
        EXPECT_DOUBLE_EQ(report.best_one_query_worst_case, 0.5);
        EXPECT_DOUBLE_EQ(report.two_query_success, 1.0);
        EXPECT_EQ(report.quantum_queries, 1);
        EXPECT_EQ(report.classical_queries_needed, 2);
        EXPECT_FALSE(report.notes.empty());
    }
}

TEST(LowerBoundTest, WitnessPairsProveAnswerAmbiguity) {
    for (int d : {3, 4, 6}) {
        CertificateReport report = classical_one_query_lower_bound(d);
        ASSERT_EQ(report.witness_pairs.size(), std::size_t(d) * std::size_t(d));
        for (const WitnessPair& w : report.witness_pairs) {
            // Both hidden permutations reproduce the observed answer, so a
            // single query cannot separate the two parities.
            EXPECT_EQ(PermutationSpec(w.m_positive, Sign::Plus, d).evaluate(w.x), w.y);
            EXPECT_EQ(PermutationSpec(w.m_negative, Sign::Minus, d).evaluate(w.x), w.y);
        }
    }
}

TEST(LowerBoundTest, TwoQueryRuleIsExactForEverySpec) {
    for (int d = 3; d <= 8; ++d)
        for (int m = 0; m < d; ++m)
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                QueryOracle oracle{PermutationSpec(m, s, d)};
                int diff = ((oracle.evaluate(1) - oracle.evaluate(0)) % d + d) % d;
                EXPECT_EQ(oracle.query_count(), 2);
                EXPECT_EQ(diff == 1, s == Sign::Plus);
                EXPECT_EQ(diff == d - 1, s == Sign::Minus);
            }
}

TEST(LowerBoundTest, RejectsOutOfRangeDimensions) {
    EXPECT_THROW(classical_one_query_lower_bound(2), std::invalid_argument);
    EXPECT_THROW(classical_one_query_lower_bound(9), std::invalid_argument);
}

TEST(RunNoisyTest, IdealNoiseReproducesTheDeterministicAnswer) {
    for (int m = 0; m < 4; ++m)
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            PermutationSpec spec(m, s, 4);
            NoisyRunResult res = run_noisy(spec, NoiseParams::ideal(), 500, 77);
            int want = spec.positive() ? 1 : 3;
            EXPECT_EQ(res.outcome.outcome_index, want);
            EXPECT_DOUBLE_EQ(res.dist.probs[want], 1.0);
            EXPECT_EQ(res.record.total(), 500);
        }
}

TEST(RunNoisyTest, SeedDeterminismAndCalibratedAccuracy) {
    PermutationSpec spec(2, Sign::Minus, 4);
    NoiseParams noise = NoiseParams::calibrated();
    NoisyRunResult a = run_noisy(spec, noise, 100000, 12345);
    NoisyRunResult b = run_noisy(spec, noise, 100000, 12345);
    EXPECT_EQ(a.record.counts, b.record.counts);
    NoisyRunResult c = run_noisy(spec, noise, 100000, 54321);
    EXPECT_NE(a.record.counts, c.record.counts);

    double model = success_probability(spec, noise);
    // 100k shots: sampling noise is ~0.0008, allow 5 sigma.
    EXPECT_NEAR(a.dist.probs[3], model, 0.005);
    EXPECT_EQ(a.outcome.parity, Parity::Negative);
}

TEST(RunNoisyTest, RejectsBadArguments) {
    PermutationSpec spec(0, Sign::Plus, 5);
    EXPECT_THROW(run_noisy(spec, NoiseParams::ideal(), 100, 1), std::invalid_argument);
    PermutationSpec ok(0, Sign::Plus, 4);
    EXPECT_THROW(run_noisy(ok, NoiseParams::ideal(), 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace qpar
