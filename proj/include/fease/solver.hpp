#pragma once

#include "fease/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace fease {

/// Symmetric item co-occurrence matrix G = X^T X (or X^T Q X), held dense.
struct GramMatrix {
    Matrix values;
    Index dim = 0;
};

/// Learned square weight matrix with zero diagonal. itemCount is the leading
/// block used for recommendation; dim exceeds it only for augmented models.
struct WeightMatrix {
    Matrix values;
    Index dim = 0;
    Index itemCount = 0;
};

/// G = X^T diag(w) X accumulated row by row; the input stays sparse.
/// rowWeights, when present, must be non-negative with one entry per row.
GramMatrix computeGram(const SpMatrix& input, const Vector* rowWeights = nullptr);

namespace kernels {

/// (A + ridge I)^-1 for symmetric PSD A. Cholesky first, pivoted LU as a
/// fallback; the result is explicitly symmetrized.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
ridgeInverse(const Eigen::MatrixBase<Derived>& gram, typename Derived::Scalar ridge) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Index d = gram.rows();
    Mat a = gram;
    a.diagonal().array() += ridge;
    Mat p;
    Eigen::LLT<Eigen::Ref<Mat>> llt(a);  // factors in place
    if (llt.info() == Eigen::Success) {
        p = Mat::Identity(d, d);
        llt.solveInPlace(p);
    } else {
        a = gram;  // the failed factorization clobbered it
        a.diagonal().array() += ridge;
        Eigen::FullPivLU<Mat> lu(std::move(a));
        if (!lu.isInvertible()) {
            throw NumericalError("ridge inverse: matrix singular after ridge, rcond="
                                 + std::to_string(static_cast<double>(lu.rcond())));
        }
        p = lu.inverse();
    }
    p = ((p + p.transpose()) * Scalar(0.5)).eval();
    return p;
}

/// Zero-diagonal weight matrix from the inverse P: B = I - P diagMat(1 / diag(P)),
/// i.e. B(i,j) = -P(i,j)/P(j,j) off the diagonal. The diagonal cancels exactly
/// and is set to zero outright.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
weightsFromInverse(const Eigen::MatrixBase<Derived>& p) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat b = p;
    for (Index j = 0; j < b.cols(); ++j) b.col(j) *= Scalar(-1) / p(j, j);
    b.diagonal().setZero();
    return b;
}

/// Closed form with a similarity prior R:
///   P = (G + (lambda + delta) I)^-1
///   C = P (G + delta R)
///   B = C - P diagMat(diag(C) / diag(P)),  diag(B) = 0 exactly.
/// With delta = 0 this reduces to the plain closed form.
template <class DerivedG, class DerivedR>
Eigen::Matrix<typename DerivedG::Scalar, Eigen::Dynamic, Eigen::Dynamic>
weightsWithPrior(const Eigen::MatrixBase<DerivedG>& gram,
                 const Eigen::MatrixBase<DerivedR>& prior,
                 typename DerivedG::Scalar lambda, typename DerivedG::Scalar delta) {
    using Scalar = typename DerivedG::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat p = ridgeInverse(gram, lambda + delta);
    Mat target = gram + delta * prior;
    Mat b(p.rows(), p.cols());
    b.noalias() = p * target;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gamma = b.diagonal().cwiseQuotient(p.diagonal());
    for (Index j = 0; j < b.cols(); ++j) b.col(j) -= gamma(j) * p.col(j);
    b.diagonal().setZero();
    return b;
}

}  // namespace kernels

/// P = (G + ridge I)^-1; requires ridge > 0.
Matrix regularizedInverse(const GramMatrix& gram, double ridge);

/// Closed-form minimizer of |X - XB|_F^2 + lambda |B|_F^2 over zero-diagonal B.
WeightMatrix solveEase(const GramMatrix& gram, const SolverParams& params,
                       const SolverLimits& limits = {});

/// Closed-form minimizer with the additional term delta |B - R|_F^2.
WeightMatrix solveEaseWithPrior(const GramMatrix& gram, const Matrix& prior,
                                const SolverParams& params,
                                const SolverLimits& limits = {});

}  // namespace fease
