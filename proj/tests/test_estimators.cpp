#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "riskbound/estimators.hpp"
#include "riskbound/samples.hpp"
#include "test_oracles.hpp"

using namespace riskbound;
namespace oracle = test_oracles;

TEST_CASE("sample batch validation and order statistics") {
    CHECK_THROWS_AS(SampleBatch({}), std::invalid_argument);
    CHECK_THROWS_AS(SampleBatch({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(SampleBatch({std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);

    const SampleBatch batch({3.0, 1.0, 2.0, 2.0});
    CHECK(batch.n() == 4);
    CHECK(batch.order_stat(1) == 3.0);
    CHECK(batch.order_stat(2) == 2.0);
    CHECK(batch.order_stat(4) == 1.0);
    CHECK(batch.mean() == doctest::Approx(2.0));
    CHECK_THROWS_AS(batch.order_stat(0), std::invalid_argument);
    CHECK_THROWS_AS(batch.order_stat(5), std::invalid_argument);
}

TEST_CASE("empirical value-at-risk examples") {
    CHECK(empirical_var(SampleBatch({1, 2, 3, 4}), 0.5) == 3.0);
    CHECK(empirical_var(SampleBatch({7}), 0.3) == 7.0);
    CHECK(empirical_var(SampleBatch({0, 0, 0, 1}), 0.25) == 1.0);
    CHECK_THROWS_AS(empirical_var(SampleBatch({1.0}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_var(SampleBatch({1.0}), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_var(SampleBatch({1.0}), 1.5), std::invalid_argument);
}

TEST_CASE("empirical CVaR examples") {
    const EstimateResult four = empirical_cvar(SampleBatch({1, 2, 3, 4}), 0.5);
    CHECK(four.value == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(four.minimizer_mu == 3.0);
    CHECK(four.value == four.minimizer_mu + four.tail_average);

    const EstimateResult constant = empirical_cvar(SampleBatch({2.5, 2.5, 2.5}), 0.3);
    CHECK(constant.value == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(constant.minimizer_mu == 2.5);

    const EstimateResult spike = empirical_cvar(SampleBatch({0, 0, 0, 1}), 0.25);
    CHECK(spike.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spike.minimizer_mu == 1.0);  // tie with mu = 0 broken toward the largest
}

TEST_CASE("empirical CVaR equals the dense-grid minimum and the order-statistic form") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = oracle::int_in(rng, 1, 60);
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        const std::vector<double> values = oracle::random_values(rng, n, -5.0, 5.0);
        const SampleBatch batch(values);

        const double computed = empirical_cvar(batch, alpha).value;
        const double grid = oracle::dense_grid_cvar_min(values, alpha);
        CHECK(computed == doctest::Approx(grid).epsilon(1e-9));

        const int k = var_order_index(n, alpha);
        const double at_order_stat =
            oracle::cvar_objective(values, alpha, oracle::nth_largest(values, k));
        CHECK(std::abs(computed - at_order_stat) <= 1e-12 * (1.0 + std::abs(computed)));
    }
}

TEST_CASE("deviation term examples") {
    const DeviationTerm d1 = deviation_term(0.1, 1000, 20.0);
    CHECK(d1.epsilon == doctest::Approx(0.13237311577922080).epsilon(1e-12));
    CHECK(d1.log_numerator == 20.0);

    const DeviationTerm d2 = deviation_term(0.1, 1000, 280.0);
    CHECK(d2.epsilon == doctest::Approx(0.18663360167069526).epsilon(1e-12));

    CHECK_THROWS_AS(deviation_term(0.1, 1000, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(deviation_term(0.1, 1000, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(deviation_term(0.1, 0, 20.0), std::invalid_argument);

    // Monotone decay toward zero in n.
    double prev = deviation_term(0.5, 10, 20.0).epsilon;
    for (int n : {100, 1000, 10000, 100000}) {
        const double cur = deviation_term(0.5, n, 20.0).epsilon;
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("relaxed estimator reduces to the standard one at epsilon = 0") {
    SplitMix64 rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = oracle::int_in(rng, 1, 40);
        const SampleBatch batch(oracle::random_values(rng, n, -5.0, 5.0));
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        CHECK(relaxed_cvar_variational(batch, alpha, 0.0).value ==
              empirical_cvar(batch, alpha).value);
    }
}

TEST_CASE("relaxed estimator worked examples") {
    // Two-point batch: the raised budget cannot add value beyond the top sample.
    CHECK(relaxed_cvar_variational(SampleBatch({0, 6}), 0.5, 0.1).value ==
          doctest::Approx(6.0).epsilon(1e-12));
    CHECK(relaxed_cvar_primal(SampleBatch({0, 6}), 0.5, 0.1) ==
          doctest::Approx(6.0).epsilon(1e-12));

    const double relaxed = relaxed_cvar_variational(SampleBatch({1, 2, 3, 4}), 0.5, 0.2).value;
    CHECK(relaxed <= 3.5 * 1.2 + 1e-12);
    CHECK(relaxed == doctest::Approx(oracle::lp_sup_enumerate({1, 2, 3, 4}, 0.5, 0.2))
                         .epsilon(1e-12));

    CHECK(relaxed_cvar_primal(SampleBatch({-1, -1}), 0.5, 0.5) ==
          doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(relaxed_cvar_primal(SampleBatch({-1, -1}), 0.5, 0.5) ==
          doctest::Approx(oracle::fine_grid_sup_2({-1, -1}, 0.5, 0.5)).epsilon(1e-2));

    // epsilon = 0 with integer n*alpha: the average of the top n*alpha samples.
    CHECK(relaxed_cvar_primal(SampleBatch({1, 2, 3, 4}), 0.5, 0.0) ==
          doctest::Approx(3.5).epsilon(1e-12));

    // Mixed signs: the optimal budget sits strictly inside the allowed range.
    CHECK(relaxed_cvar_primal(SampleBatch({1, -1}), 0.5, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relaxed_cvar_variational(SampleBatch({1, -1}), 0.5, 0.5).value ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong duality between the primal and variational forms") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = oracle::int_in(rng, 1, 200);
        const double alpha = oracle::uniform_in(rng, 0.01, 0.9);
        const double eps = oracle::uniform_in(rng, 0.0, 0.5);
        const SampleBatch batch(oracle::random_values(rng, n, -5.0, 5.0));
        const double primal = relaxed_cvar_primal(batch, alpha, eps);
        const double variational = relaxed_cvar_variational(batch, alpha, eps).value;
        CHECK(std::abs(primal - variational) <= 1e-9 * (1.0 + std::abs(variational)));
    }
}

TEST_CASE("primal equals the exact LP optimum on small instances") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = oracle::int_in(rng, 1, 6);
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        const double eps = oracle::uniform_in(rng, 0.0, 0.5);
        const std::vector<double> values = oracle::random_values(rng, n, -5.0, 5.0);
        const double primal = relaxed_cvar_primal(SampleBatch(values), alpha, eps);
        const double lp = oracle::lp_sup_enumerate(values, alpha, eps);
        CHECK(std::abs(primal - lp) <= 1e-9 * (1.0 + std::abs(lp)));
    }
}

TEST_CASE("relaxed-vs-standard inequalities") {
    SplitMix64 rng(505);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = oracle::int_in(rng, 1, 80);
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        const double eps = oracle::uniform_in(rng, 0.0, 0.5);
        const bool nonnegative = (trial % 2) == 0;
        const std::vector<double> values =
            oracle::random_values(rng, n, nonnegative ? 0.0 : -5.0, 5.0);
        const SampleBatch batch(values);

        const double hat = empirical_cvar(batch, alpha).value;
        const double tilde = relaxed_cvar_variational(batch, alpha, eps).value;
        const double stat = empirical_var(batch, alpha);
        const double tol = 1e-12 * (1.0 + std::abs(hat));

        CHECK(tilde <= hat + std::abs(stat) * eps + tol);
        if (nonnegative) {
            CHECK(tilde <= hat * (1.0 + eps) + tol);
        }
    }
}

TEST_CASE("coherence: translation equivariance and positive homogeneity") {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = oracle::int_in(rng, 1, 50);
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        const std::vector<double> values = oracle::random_values(rng, n, -5.0, 5.0);
        const double shift = oracle::uniform_in(rng, -3.0, 3.0);
        const double scale = oracle::uniform_in(rng, 0.1, 4.0);

        std::vector<double> shifted = values;
        for (double& v : shifted) v += shift;
        std::vector<double> scaled = values;
        for (double& v : scaled) v *= scale;

        const double base = empirical_cvar(SampleBatch(values), alpha).value;
        CHECK(empirical_cvar(SampleBatch(shifted), alpha).value ==
              doctest::Approx(base + shift).epsilon(1e-12));
        CHECK(empirical_cvar(SampleBatch(scaled), alpha).value ==
              doctest::Approx(scale * base).epsilon(1e-12));
    }
}

TEST_CASE("empirical CVaR dominates the mean and decreases in alpha") {
    SplitMix64 rng(707);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = oracle::int_in(rng, 1, 50);
        const SampleBatch batch(oracle::random_values(rng, n, -5.0, 5.0));
        CHECK(empirical_cvar(batch, 0.95).value >= batch.mean() - 1e-12);

        double prev = std::numeric_limits<double>::infinity();
        for (double alpha : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9}) {
            const double cur = empirical_cvar(batch, alpha).value;
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("kappa values and series branch") {
    CHECK(kappa(0.0) == 0.5);
    CHECK(kappa(0.5) == doctest::Approx(0.59488508280051259).epsilon(1e-14));
    CHECK(kappa(-1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    // Series and direct branches agree around the switch point.
    for (double x : {9.9e-5, 1.01e-4, -9.9e-5, -1.01e-4}) {
        const double direct = (std::expm1(x) - x) / (x * x);
        CHECK(kappa(x) == doctest::Approx(direct).epsilon(1e-10));
    }

    // kappa(x) <= 3/5 for x <= 1/2.
    for (double x = -10.0; x <= 0.5 + 1e-12; x += 1e-3) {
        CHECK(kappa(x) <= 0.6);
    }
    CHECK(kappa(0.5) <= 0.6);
}

TEST_CASE("estimate decomposition identity for the relaxed estimator") {
    SplitMix64 rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = oracle::int_in(rng, 1, 40);
        const double alpha = oracle::uniform_in(rng, 0.05, 0.9);
        const double eps = oracle::uniform_in(rng, 0.0, 0.5);
        const SampleBatch batch(oracle::random_values(rng, n, -5.0, 5.0));
        const EstimateResult r = relaxed_cvar_variational(batch, alpha, eps);
        CHECK(r.value ==
              r.minimizer_mu + std::abs(r.minimizer_mu) * eps + r.tail_average);
    }
}
