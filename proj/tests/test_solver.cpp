#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fease/solver.hpp"
#include "support/oracle.hpp"
#include "support/random_data.hpp"

#include <random>

using namespace fease;

namespace {

SpMatrix fromDense(const Matrix& d) {
    std::vector<Triplet> trips;
    for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index c = 0; c < d.cols(); ++c)
            if (d(r, c) != 0.0) trips.emplace_back(r, c, d(r, c));
    SpMatrix m(d.rows(), d.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

double maxAbsDiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("computeGram counts co-occurrences") {
    Matrix x(2, 2);
    x << 1, 1, 1, 0;
    GramMatrix g = computeGram(fromDense(x));
    Matrix expected(2, 2);
    expected << 2, 1, 1, 1;
    CHECK(maxAbsDiff(g.values, expected) == 0.0);
    CHECK(g.dim == 2);
}

TEST_CASE("computeGram of orthogonal rows is the identity") {
    GramMatrix g = computeGram(fromDense(Matrix::Identity(3, 3)));
    CHECK(maxAbsDiff(g.values, Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("computeGram applies per-row weights") {
    Matrix x(2, 2);
    x << 1, 1, 1, 0;
    Vector w(2);
    w << 1, 4;
    GramMatrix g = computeGram(fromDense(x), &w);
    Matrix expected(2, 2);
    expected << 5, 1, 1, 1;
    CHECK(maxAbsDiff(g.values, expected) == 0.0);
}

TEST_CASE("computeGram rejects mismatched weights and empty input") {
    Matrix x(2, 2);
    x << 1, 1, 1, 0;
    Vector w(3);
    w << 1, 1, 1;
    CHECK_THROWS_AS(computeGram(fromDense(x), &w), ParameterError);
    SpMatrix empty(0, 3);
    CHECK_THROWS_AS(computeGram(empty), ParameterError);
}

TEST_CASE("gram diagonal dominates its row for binary inputs") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        SpMatrix x = testing::randomBinaryMatrix(25, 10, 0.3, rng);
        GramMatrix g = computeGram(x);
        CHECK(maxAbsDiff(g.values, g.values.transpose()) == 0.0);
        for (Eigen::Index i = 0; i < g.dim; ++i)
            for (Eigen::Index j = 0; j < g.dim; ++j)
                CHECK(g.values(i, i) >= g.values(i, j));
    }
}

TEST_CASE("regularizedInverse on the 2x2 example") {
    Matrix gv(2, 2);
    gv << 2, 1, 1, 1;
    Matrix p = regularizedInverse({gv, 2}, 1.0);
    Matrix expected(2, 2);
    expected << 2.0 / 5, -1.0 / 5, -1.0 / 5, 3.0 / 5;
    CHECK(maxAbsDiff(p, expected) < 1e-14);
}

TEST_CASE("regularizedInverse trivial cases") {
    Matrix p = regularizedInverse({Matrix::Identity(3, 3), 3}, 1.0);
    CHECK(maxAbsDiff(p, 0.5 * Matrix::Identity(3, 3)) < 1e-14);
    p = regularizedInverse({Matrix::Zero(2, 2), 2}, 2.0);
    CHECK(maxAbsDiff(p, 0.5 * Matrix::Identity(2, 2)) < 1e-14);
    CHECK_THROWS_AS(regularizedInverse({Matrix::Zero(2, 2), 2}, 0.0), ParameterError);
}

TEST_CASE("regularizedInverse is accurate and symmetric") {
    std::mt19937_64 rng(17);
    SpMatrix x = testing::randomBinaryMatrix(200, 120, 0.1, rng);
    GramMatrix g = computeGram(x);
    for (double lambda : {0.5, 10.0, 500.0}) {
        Matrix p = regularizedInverse(g, lambda);
        Matrix a = g.values;
        a.diagonal().array() += lambda;
        CHECK(maxAbsDiff(a * p, Matrix::Identity(g.dim, g.dim)) < 1e-8);
        CHECK(maxAbsDiff(p, p.transpose()) < 1e-10);
    }
}

TEST_CASE("solveEase matches the worked 2x2 example") {
    Matrix x(2, 2);
    x << 1, 1, 1, 0;
    GramMatrix g = computeGram(fromDense(x));
    WeightMatrix b = solveEase(g, {.lambda = 1.0});
    Matrix expected(2, 2);
    expected << 0, 1.0 / 3, 1.0 / 2, 0;
    CHECK(maxAbsDiff(b.values, expected) < 1e-14);
    CHECK(b.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solveEase on a diagonal gram is zero") {
    Matrix gv = Matrix::Zero(4, 4);
    gv.diagonal() << 3, 1, 2, 5;
    WeightMatrix b = solveEase({gv, 4}, {.lambda = 0.7});
    CHECK(b.values.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("solveEase equals the constrained least-squares oracle") {
    std::mt19937_64 rng(23);
    SpMatrix x = testing::randomBinaryMatrix(8, 12, 0.35, rng);
    GramMatrix g = computeGram(x);
    WeightMatrix b = solveEase(g, {.lambda = 0.5});
    Matrix ref = oracle::constrainedRidgeMinimizer(g.values, 0.5);
    CHECK(maxAbsDiff(b.values, ref) < 1e-6);
}

TEST_CASE("solveEase oracle equivalence over random matrices") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 6; ++rep) {
        SpMatrix x = testing::randomBinaryMatrix(5 + static_cast<Eigen::Index>(rng() % 26),
                                                 2 + static_cast<Eigen::Index>(rng() % 11),
                                                 0.3, rng);
        GramMatrix g = computeGram(x);
        for (double lambda : {0.1, 1.0, 10.0}) {
            WeightMatrix b = solveEase(g, {.lambda = lambda});
            Matrix ref = oracle::constrainedRidgeMinimizer(g.values, lambda);
            CHECK(maxAbsDiff(b.values, ref) < 1e-6);
        }
    }
}

TEST_CASE("solveEase enforces the dimension cap") {
    GramMatrix g{Matrix::Zero(4, 4), 4};
    CHECK_THROWS_AS(solveEase(g, {.lambda = 1.0}, {.maxDim = 3}), CapExceeded);
}

TEST_CASE("solveEaseWithPrior hand example with all-cold gram") {
    Matrix r(2, 2);
    r << 1, 0.7, 0.7, 1;
    WeightMatrix b = solveEaseWithPrior({Matrix::Zero(2, 2), 2}, r, {.lambda = 1.0, .delta = 1.0});
    Matrix expected(2, 2);
    expected << 0, 0.35, 0.35, 0;
    CHECK(maxAbsDiff(b.values, expected) < 1e-14);
}

TEST_CASE("solveEaseWithPrior reduces to solveEase at delta 0") {
    std::mt19937_64 rng(31);
    SpMatrix x = testing::randomBinaryMatrix(20, 9, 0.3, rng);
    GramMatrix g = computeGram(x);
    Matrix r = testing::randomSimilarity(9, rng);
    WeightMatrix plain = solveEase(g, {.lambda = 2.0});
    WeightMatrix withPrior = solveEaseWithPrior(g, r, {.lambda = 2.0, .delta = 0.0});
    CHECK(maxAbsDiff(plain.values, withPrior.values) < 1e-12);
}

TEST_CASE("solveEaseWithPrior equals the oracle") {
    std::mt19937_64 rng(37);
    SpMatrix x = testing::randomBinaryMatrix(6, 10, 0.35, rng);
    GramMatrix g = computeGram(x);
    Matrix r = testing::randomSimilarity(10, rng);
    for (double delta : {0.25, 1.0}) {
        WeightMatrix b = solveEaseWithPrior(g, r, {.lambda = 0.5, .delta = delta});
        Matrix ref = oracle::constrainedRidgeMinimizer(g.values, 0.5, delta, &r);
        CHECK(maxAbsDiff(b.values, ref) < 1e-6);
        CHECK(b.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("solveEaseWithPrior validates dimensions") {
    GramMatrix g{Matrix::Zero(3, 3), 3};
    CHECK_THROWS_AS(solveEaseWithPrior(g, Matrix::Zero(2, 2), {.lambda = 1.0, .delta = 1.0}),
                    ParameterError);
}

TEST_CASE("reconstruction loss is non-decreasing in lambda") {
    std::mt19937_64 rng(41);
    SpMatrix x = testing::randomBinaryMatrix(30, 12, 0.3, rng);
    GramMatrix g = computeGram(x);
    double prev = -1.0;
    for (double lambda : {0.1, 1.0, 10.0}) {
        WeightMatrix b = solveEase(g, {.lambda = lambda});
        double loss = oracle::reconstructionLoss(x, b.values);
        CHECK(loss >= prev);
        prev = loss;
    }
}
