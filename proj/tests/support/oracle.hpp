#pragma once

// Brute-force reference solvers for the zero-diagonal ridge problems. These
// deliberately avoid the closed-form path: each column is solved as an
// independent reduced linear system with the diagonal unknown eliminated,
// using a pivoted LU factorization.

#include "fease/types.hpp"

#include <Eigen/LU>

namespace fease::oracle {

// argmin_B |X - XB|_F^2 + lambda |B|_F^2 + delta |B - R|_F^2  s.t. diag(B) = 0.
// Column j solves (G + (lambda+delta) I) b = G e_j + delta R e_j with the
// j-th unknown fixed at zero, i.e. the system with row/column j removed.
inline Matrix constrainedRidgeMinimizer(const Matrix& gram, double lambda,
                                        double delta = 0.0,
                                        const Matrix* prior = nullptr) {
    const Eigen::Index d = gram.rows();
    Matrix a = gram;
    a.diagonal().array() += lambda + delta;
    Matrix b = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Matrix reduced(d - 1, d - 1);
        Vector rhs(d - 1);
        Eigen::Index ri = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i == j) continue;
            rhs(ri) = gram(i, j) + (prior ? delta * (*prior)(i, j) : 0.0);
            Eigen::Index rj = 0;
            for (Eigen::Index k = 0; k < d; ++k) {
                if (k == j) continue;
                reduced(ri, rj++) = a(i, k);
            }
            ++ri;
        }
        Vector sol = Eigen::FullPivLU<Matrix>(reduced).solve(rhs);
        ri = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i == j) continue;
            b(i, j) = sol(ri++);
        }
    }
    return b;
}

// Training objective |X - XB|_F^2 evaluated directly on a dense copy of X.
inline double reconstructionLoss(const SpMatrix& x, const Matrix& b) {
    Matrix xd = Matrix(x);
    return (xd - xd * b).squaredNorm();
}

}  // namespace fease::oracle
