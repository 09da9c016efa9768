#pragma once

// Deterministic random inputs for property-style tests.

#include "fease/types.hpp"

#include <random>
#include <vector>

namespace fease::testing {

inline SpMatrix randomBinaryMatrix(Eigen::Index rows, Eigen::Index cols, double density,
                                   std::mt19937_64& rng) {
    std::vector<Triplet> trips;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            if (unit(rng) < density) trips.emplace_back(r, c, 1.0);
    SpMatrix m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

// Symmetric matrix with entries in [0, 1] and unit diagonal, shaped like a
// cosine-similarity matrix.
inline Matrix randomSimilarity(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) r(i, j) = r(j, i) = unit(rng);
    }
    return r;
}

}  // namespace fease::testing
