#include "fease/solver.hpp"

#include <utility>
#include <vector>

namespace fease {

namespace {

void checkDim(Index dim, const SolverLimits& limits) {
    if (dim > limits.maxDim) {
        throw CapExceeded("solver cap exceeded: D=" + std::to_string(dim)
                          + " > maxDim=" + std::to_string(limits.maxDim));
    }
}

}  // namespace

GramMatrix computeGram(const SpMatrix& input, const Vector* rowWeights) {
    if (input.rows() < 1 || input.cols() < 1)
        throw ParameterError("computeGram: input must have at least one row and column");
    if (rowWeights) {
        if (rowWeights->size() != input.rows())
            throw ParameterError("computeGram: row_weights length must equal row count");
        if ((rowWeights->array() < 0.0).any())
            throw ParameterError("computeGram: row_weights must be non-negative");
    }

    const Index d = input.cols();
    Matrix g = Matrix::Zero(d, d);
    std::vector<std::pair<Index, double>> row;
    for (Index r = 0; r < input.outerSize(); ++r) {
        const double w = rowWeights ? (*rowWeights)(r) : 1.0;
        if (w == 0.0) continue;
        row.clear();
        for (SpMatrix::InnerIterator it(input, r); it; ++it)
            row.emplace_back(it.col(), it.value());
        for (std::size_t a = 0; a < row.size(); ++a) {
            const double va = w * row[a].second;
            for (std::size_t b = a; b < row.size(); ++b)
                g(row[a].first, row[b].first) += va * row[b].second;
        }
    }
    // accumulated the upper triangle only; mirror for exact symmetry
    g.triangularView<Eigen::StrictlyLower>() = g.triangularView<Eigen::StrictlyUpper>().transpose();
    return {std::move(g), d};
}

Matrix regularizedInverse(const GramMatrix& gram, double ridge) {
    if (!(ridge > 0.0)) throw ParameterError("regularizedInverse: ridge must be > 0");
    return kernels::ridgeInverse(gram.values, ridge);
}

WeightMatrix solveEase(const GramMatrix& gram, const SolverParams& params,
                       const SolverLimits& limits) {
    if (!(params.lambda > 0.0)) throw ParameterError("solveEase: lambda must be > 0");
    checkDim(gram.dim, limits);
    Matrix b = kernels::weightsFromInverse(kernels::ridgeInverse(gram.values, params.lambda));
    return {std::move(b), gram.dim, gram.dim};
}

WeightMatrix solveEaseWithPrior(const GramMatrix& gram, const Matrix& prior,
                                const SolverParams& params, const SolverLimits& limits) {
    if (!(params.lambda > 0.0)) throw ParameterError("solveEaseWithPrior: lambda must be > 0");
    if (params.delta < 0.0) throw ParameterError("solveEaseWithPrior: delta must be >= 0");
    if (prior.rows() != gram.dim || prior.cols() != gram.dim)
        throw ParameterError("solveEaseWithPrior: prior dimension mismatch ("
                             + std::to_string(prior.rows()) + "x" + std::to_string(prior.cols())
                             + " vs gram " + std::to_string(gram.dim) + ")");
    checkDim(gram.dim, limits);
    Matrix b = kernels::weightsWithPrior(gram.values, prior, params.lambda, params.delta);
    return {std::move(b), gram.dim, gram.dim};
}

}  // namespace fease
