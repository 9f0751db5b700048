#include <doctest.h>

#include <cmath>
#include <set>

#include "causaldna/ci.hpp"
#include "causaldna/common.hpp"
#include "support.hpp"

using namespace causaldna;

namespace {

CovarianceMatrix ar_chain_covariance() {
    Eigen::MatrixXd m(3, 3);
    m << 1, 1, 1, 1, 2, 2, 1, 2, 3;
    return CovarianceMatrix(m);
}

CovarianceMatrix random_spd(Rng& rng, int p) {
    Eigen::MatrixXd a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = rng.gaussian();
    Eigen::MatrixXd m = a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(p, p);
    return CovarianceMatrix((m + m.transpose()) / 2.0);
}

}  // namespace

TEST_CASE("covariance matrix validation") {
    CHECK_THROWS_AS(CovarianceMatrix{Eigen::MatrixXd::Zero(2, 3)}, std::invalid_argument);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, 0.2, 1;
    CHECK_THROWS_AS(CovarianceMatrix{asym}, std::invalid_argument);
    Eigen::MatrixXd indef(2, 2);
    indef << 1, 2, 2, 1;
    CHECK_THROWS_AS(CovarianceMatrix{indef}, numeric_error);
    CHECK(CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4)).dim() == 4);
}

TEST_CASE("partial correlation on fixed matrices") {
    CovarianceMatrix id(Eigen::MatrixXd::Identity(3, 3));
    CHECK(partial_correlation(id, 0, 1, {}) == doctest::Approx(0.0));

    CovarianceMatrix chain = ar_chain_covariance();
    CHECK(partial_correlation(chain, 0, 2, {1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(partial_correlation(chain, 0, 2, {}) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(partial_correlation(chain, 0, 1, {}) == doctest::Approx(1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(partial_correlation(chain, 0, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_correlation(chain, 0, 1, {1}), std::invalid_argument);
    CHECK_THROWS_AS(partial_correlation(chain, 0, 5, {}), std::out_of_range);

    Eigen::MatrixXd near(2, 2);
    near << 1.0, 1.0 - 1e-15, 1.0 - 1e-15, 1.0;
    CHECK_THROWS_AS(partial_correlation(CovarianceMatrix(near), 0, 1, {}), numeric_error);
}

TEST_CASE("partial correlation matches the regression-residual route") {
    Rng rng(55001);
    for (int rep = 0; rep < 100; ++rep) {
        int p = 3 + static_cast<int>(rng.uniform_below(6));
        CovarianceMatrix sigma = random_spd(rng, p);
        int i = static_cast<int>(rng.uniform_below(p));
        int j = (i + 1 + static_cast<int>(rng.uniform_below(p - 1))) % p;
        std::vector<int> s;
        for (int w = 0; w < p; ++w)
            if (w != i && w != j && rng.bernoulli(0.4)) s.push_back(w);
        double expected = testsupport::residual_partial_correlation(sigma.matrix(), i, j, s);
        CHECK(partial_correlation(sigma, i, j, s) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("d-separation oracle tester") {
    DsepOracle tester(testsupport::chain_collider_dag());
    CHECK(tester.test(0, 2, {}).independent());
    CHECK(tester.test(0, 2, {3}).dependent());
    CHECK(tester.test(0, 1, {}).dependent());
    CHECK(!tester.test(0, 2, {}).strength.has_value());
    CHECK(tester.oracle_dag() != nullptr);
    CHECK(tester.num_variables() == 5);
}

TEST_CASE("population tester thresholds absolute partial correlations") {
    GaussianPopulationTester tester(ar_chain_covariance(), 0.01);
    CHECK(tester.test(0, 2, {1}).independent());
    CHECK(tester.test(0, 2, {}).dependent());
    CHECK(tester.test(0, 1, {}).strength.value() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(tester.dependence_threshold().value() == doctest::Approx(0.01));
    CHECK_THROWS_AS(GaussianPopulationTester(ar_chain_covariance(), -0.1), std::invalid_argument);
}

TEST_CASE("sample tester separates verdicts with two thresholds") {
    // rho(0, 2 | {}) = 0.577, rho(0, 2 | {1}) = 0, rho(0, 1 | {}) = 0.707.
    GaussianSampleTester tester(ar_chain_covariance(), 1000, 0.02, 0.6);
    CHECK(tester.test(0, 2, {1}).independent());
    CHECK(tester.test(0, 2, {}).inconclusive());
    CHECK(tester.test(0, 1, {}).dependent());
    CHECK(tester.sample_size() == 1000);
    CHECK_THROWS_AS(GaussianSampleTester(ar_chain_covariance(), 1000, 0.5, 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(GaussianSampleTester(ar_chain_covariance(), 0, 0.02, 0.2),
                    std::invalid_argument);
}

TEST_CASE("ledger counts distinct queries once") {
    DsepOracle tester(testsupport::chain_collider_dag());
    tester.test(0, 2, {});
    tester.test(2, 0, {});
    tester.test(0, 2, {});
    tester.test(0, 2, {3, 1});
    tester.test(0, 2, {1, 3});
    CHECK(tester.ledger().total() == 2);
    CHECK(tester.ledger().independences().size() == 2);
    CHECK(tester.ledger().dependences().empty());
    CHECK(tester.ledger().total() >= static_cast<long>(tester.ledger().independences().size() +
                                                       tester.ledger().dependences().size()));

    auto fresh = tester.clone();
    CHECK(fresh->ledger().total() == 0);
    fresh->test(0, 1, {});
    TestLedger merged;
    merged.merge(tester.ledger());
    merged.merge(fresh->ledger());
    CHECK(merged.total() == 3);
    CHECK(merged.dependences().size() == 1);
}

TEST_CASE("ledger conservation and inconclusive accounting") {
    GaussianSampleTester tester(ar_chain_covariance(), 1000, 0.02, 0.6);
    tester.test(0, 2, {1});
    tester.test(0, 2, {});
    tester.test(0, 1, {});
    tester.test(1, 2, {});
    const TestLedger& led = tester.ledger();
    CHECK(led.total() == 4);
    CHECK(led.num_inconclusive() == 1);
    CHECK(static_cast<long>(led.independences().size() + led.dependences().size()) +
              led.num_inconclusive() ==
          led.total());
}

TEST_CASE("numeric failures surface as inconclusive verdicts with a warning") {
    Eigen::MatrixXd near(3, 3);
    near << 1.0, 1.0 - 1e-15, 0.0, 1.0 - 1e-15, 1.0, 0.0, 0.0, 0.0, 1.0;
    GaussianPopulationTester tester(CovarianceMatrix(near), 0.01);
    CHECK(tester.test(0, 1, {}).inconclusive());
    CHECK(tester.ledger().num_numeric_warnings() == 1);
    CHECK(tester.test(0, 2, {}).independent());
}

TEST_CASE("precision edges on fixed covariances") {
    CovarianceMatrix id(Eigen::MatrixXd::Identity(4, 4));
    CHECK(precision_moral_edges(id, {0, 1, 2, 3}, 1e-8).num_edges() == 0);

    // Collider 0 -> 2 <- 1 with unit coefficients and unit noise.
    Eigen::MatrixXd collider(3, 3);
    collider << 1, 0, 1, 0, 1, 1, 1, 1, 3;
    CovarianceMatrix sigma(collider);
    CHECK(precision_moral_edges(sigma, {0, 1}, 1e-8).num_edges() == 0);
    UndirectedGraph full = precision_moral_edges(sigma, {0, 1, 2}, 1e-8);
    CHECK(full.has_edge(0, 1));
    CHECK(full.has_edge(0, 2));
    CHECK(full.has_edge(1, 2));

    CHECK_THROWS_AS(precision_moral_edges(sigma, {0, 0}, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(precision_moral_edges(sigma, {0, 1}, -1.0), std::invalid_argument);
}

TEST_CASE("precision edges reproduce moral graphs of linear systems") {
    Rng rng(881100);
    int agree = 0, total = 0;
    for (int rep = 0; rep < 40; ++rep) {
        int p = 3 + static_cast<int>(rng.uniform_below(5));
        Dag g = testsupport::random_test_dag(rng, p, rng.uniform(0.2, 0.5));
        auto [coefs, vars] = testsupport::random_sem_parameters(g, rng);
        CovarianceMatrix sigma(testsupport::sem_covariance_by_inversion(p, coefs, vars));

        std::vector<int> all(p);
        for (int i = 0; i < p; ++i) all[i] = i;
        CHECK(precision_moral_edges(sigma, all, 1e-7).edges() == moral_graph_over(g, all).edges());

        // Marginal model over a strict subset.
        std::vector<int> subset;
        for (int v = 0; v < p; ++v)
            if (rng.bernoulli(0.7)) subset.push_back(v);
        if (subset.size() >= 2) {
            auto got = precision_moral_edges(sigma, subset, 1e-7).edges();
            auto want = moral_graph_over(g, subset).edges();
            total += 1;
            agree += got == want ? 1 : 0;
        }
    }
    CHECK(agree == total);
}

TEST_CASE("population tester agrees with the d-separation oracle at tiny lambda") {
    Rng rng(430012);
    long agree = 0, total = 0;
    for (int rep = 0; rep < 100; ++rep) {
        int p = 3 + static_cast<int>(rng.uniform_below(6));
        Dag g = testsupport::random_test_dag(rng, p, rng.uniform(0.2, 0.5));
        auto [coefs, vars] = testsupport::random_sem_parameters(g, rng);
        CovarianceMatrix sigma(testsupport::sem_covariance_by_inversion(p, coefs, vars));
        DsepOracle oracle(g);
        GaussianPopulationTester pop(sigma, 1e-6);
        for (int q = 0; q < 30; ++q) {
            int u = static_cast<int>(rng.uniform_below(p));
            int v = static_cast<int>(rng.uniform_below(p));
            if (u == v) continue;
            std::vector<int> s;
            for (int w = 0; w < p; ++w)
                if (w != u && w != v && rng.bernoulli(0.3)) s.push_back(w);
            ++total;
            if (oracle.test(u, v, s).kind == pop.test(u, v, s).kind) ++agree;
        }
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("empirical covariance uses denominator n") {
    Eigen::MatrixXd data(4, 2);
    data << 1, 2, 3, 2, 1, 4, 3, 4;
    CovarianceMatrix sn = empirical_covariance(data);
    CHECK(sn(0, 0) == doctest::Approx(1.0));
    CHECK(sn(1, 1) == doctest::Approx(1.0));
    CHECK(sn(0, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(empirical_covariance(Eigen::MatrixXd::Zero(1, 2)), std::invalid_argument);
}

TEST_CASE("tester capacity guard") {
    CHECK_THROWS_AS(CovarianceMatrix m(Eigen::MatrixXd::Identity(49, 49));
                    GaussianPopulationTester t(m, 0.01), capacity_error);
}
