#include "candlecast/linalg.hpp"

#include <Eigen/QR>

#include "candlecast/errors.hpp"

namespace candlecast {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& X) {
    if (X.rows() < X.cols()) {
        throw RankDeficientError("fewer observations than regressors");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.rows(), X.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(X);
    if (qr.rank() < X.cols()) {
        throw RankDeficientError("regressor matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                 std::to_string(X.cols()) + ")");
    }
    return qr;
}

}  // namespace

OlsSolution ols(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const auto qr = checked_qr(X);
    OlsSolution out;
    out.coef = qr.solve(Y);
    out.residuals = Y - X * out.coef;
    if (!out.coef.allFinite()) {
        throw NumericError("non-finite least-squares coefficients");
    }
    return out;
}

Eigen::MatrixXd ols_inverse_gram(const Eigen::MatrixXd& X) {
    const auto qr = checked_qr(X);
    const Eigen::Index n = X.cols();
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    // X P = Q R  =>  (X'X)^{-1} = P (R'R)^{-1} P'
    const Eigen::MatrixXd inner = r_inv * r_inv.transpose();
    return qr.colsPermutation() * inner * qr.colsPermutation().transpose();
}

Eigen::MatrixXd partial_out(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.cols() == 0) {
        return Y;
    }
    return ols(X, Y).residuals;
}

}  // namespace candlecast
