#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fease {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Regularization knobs shared by the whole model family: lambda is the L2
/// strength, delta the prior strength, alpha the item-tag weight and beta the
/// user-attribute weight.
struct SolverParams {
    double lambda = 250.0;
    double delta = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

/// Dense solves are O(D^2) in memory; anything beyond maxDim x maxDim is
/// refused up front instead of thrashing.
struct SolverLimits {
    Index maxDim = 40000;
};

// Error types map to the CLI exit-code scheme:
//   1 internal, 2 config/IO, 3 resource cap, 4 missing artifact.

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingArtifact : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fease
