#pragma once

// Test-only oracles, kept independent of the filtering code they check.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "hourcast/kalman.hpp"

namespace hourcast::test {

struct JointGaussianOracle {
    Eigen::VectorXd y_mean;
    Eigen::MatrixXd y_cov;
    Eigen::VectorXd posterior_mean;  // beta_T | y
    Eigen::MatrixXd posterior_cov;
    double log_density = 0.0;        // of the observed y under the joint Gaussian
};

/// Brute-force construction of the joint Gaussian over (y_1..y_T, beta_T)
/// by explicit propagation of means and covariances, followed by direct
/// conditioning. O(T^2 d^2) storage; fine for the small instances it serves.
inline JointGaussianOracle joint_gaussian_oracle(const KalmanHyperParams& hp,
                                                 const std::vector<Eigen::VectorXd>& rows,
                                                 const Eigen::VectorXd& ys) {
    const int t_len = static_cast<int>(rows.size());
    const int d = hp.dim();
    const Eigen::MatrixXd b = hp.alpha.asDiagonal();
    const Eigen::MatrixXd q = hp.q_scale * Eigen::MatrixXd::Identity(d, d);

    // state moments: m[i] = E beta_i, cc[i] = Cov(beta_i, beta_i), 1-based
    std::vector<Eigen::VectorXd> m(t_len + 1);
    std::vector<Eigen::MatrixXd> cc(t_len + 1);
    m[0] = hp.mu0;
    cc[0] = hp.v0;
    for (int i = 1; i <= t_len; ++i) {
        m[i] = b * m[i - 1];
        cc[i] = b * cc[i - 1] * b.transpose() + q;
    }

    // Cov(beta_i, beta_j) = cc[i] * (B^{j-i})' for i <= j
    const auto cross_state = [&](int i, int j) -> Eigen::MatrixXd {
        Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(d, d);
        for (int k = 0; k < j - i; ++k) phi = b * phi;
        return cc[i] * phi.transpose();
    };

    JointGaussianOracle oracle;
    oracle.y_mean.resize(t_len);
    oracle.y_cov.resize(t_len, t_len);
    for (int i = 1; i <= t_len; ++i) {
        oracle.y_mean[i - 1] = rows[i - 1].dot(m[i]);
        for (int j = i; j <= t_len; ++j) {
            const Eigen::MatrixXd cs = cross_state(i, j);
            double cov = rows[i - 1].dot(cs * rows[j - 1]);
            if (i == j) cov += hp.sigma * hp.sigma;
            oracle.y_cov(i - 1, j - 1) = cov;
            oracle.y_cov(j - 1, i - 1) = cov;
        }
    }

    // Cov(beta_T, y_i) = (Cov(beta_i, beta_T))' h_i
    Eigen::MatrixXd cross(d, t_len);
    for (int i = 1; i <= t_len; ++i)
        cross.col(i - 1) = cross_state(i, t_len).transpose() * rows[i - 1];

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(oracle.y_cov);
    const Eigen::VectorXd resid = ys - oracle.y_mean;
    oracle.posterior_mean = m[t_len] + cross * ldlt.solve(resid);
    oracle.posterior_cov = cc[t_len] - cross * ldlt.solve(cross.transpose());

    const double logdet = ldlt.vectorD().array().log().sum();
    oracle.log_density = -0.5 * (resid.dot(ldlt.solve(resid)) + logdet +
                                 t_len * std::log(2.0 * std::numbers::pi));
    return oracle;
}

}  // namespace hourcast::test
