#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct QpSvr {
    std::vector<double> beta;  // alpha - alpha*
    double bias = 0.0;
    double gamma = 1.0;
    int iterations = 0;

    double predict(const std::vector<double>& x, double t) const {
        double acc = bias;
        for (std::size_t i = 0; i < x.size(); ++i) acc += beta[i] * std::exp(-gamma * (x[i] - t) * (x[i] - t));
        return acc;
    }
};

// Dense primal-dual interior-point solve of the epsilon-SVR dual in the 2l
// variables z = [alpha; alpha*]:
//   min 1/2 z'Qz + c'z  s.t.  sum(alpha) - sum(alpha*) = 0,  0 <= z <= C
// with Q = [K -K; -K K], c = [eps - y; eps + y]. The bias is the multiplier
// of the equality constraint.
inline QpSvr solve_svr_qp(const std::vector<double>& x, const std::vector<double>& y, double c_reg, double eps,
                          double gamma) {
    const int l = static_cast<int>(x.size());
    const int n = 2 * l;
    Eigen::MatrixXd K(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) K(i, j) = std::exp(-gamma * (x[i] - x[j]) * (x[i] - x[j]));
    Eigen::MatrixXd Q(n, n);
    Q << K, -K, -K, K;
    Eigen::VectorXd c(n), a(n);
    for (int i = 0; i < l; ++i) {
        c(i) = eps - y[i];
        c(l + i) = eps + y[i];
        a(i) = 1.0;
        a(l + i) = -1.0;
    }

    Eigen::VectorXd z = Eigen::VectorXd::Constant(n, c_reg / 2);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(n);  // multipliers of z >= 0
    Eigen::VectorXd t = Eigen::VectorXd::Ones(n);  // multipliers of z <= C
    double nu = 0.0;
    int it = 0;
    for (; it < 200; ++it) {
        const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, c_reg) - z;
        const double gap = (s.dot(z) + t.dot(u)) / (2.0 * n);
        const Eigen::VectorXd rd = Q * z + c + a * nu - s + t;
        const double rp = a.dot(z);
        if (gap < 1e-13 && rd.lpNorm<Eigen::Infinity>() < 1e-11 && std::abs(rp) < 1e-11) break;
        const double mu = 0.1 * gap;
        // Eliminate ds, dt: ds = (mu - s z - s dz)/z, dt = (mu - t u + t dz)/u.
        const Eigen::VectorXd d = s.cwiseQuotient(z) + t.cwiseQuotient(u);
        const Eigen::VectorXd rhs_s = (Eigen::VectorXd::Constant(n, mu) - s.cwiseProduct(z)).cwiseQuotient(z);
        const Eigen::VectorXd rhs_t = (Eigen::VectorXd::Constant(n, mu) - t.cwiseProduct(u)).cwiseQuotient(u);
        // (Q + D) dz + a dnu = -rd + rhs_s - rhs_t ;  a' dz = -rp
        Eigen::MatrixXd M = Q;
        M.diagonal() += d;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        const Eigen::VectorXd r = -rd + rhs_s - rhs_t;
        const Eigen::VectorXd m_r = ldlt.solve(r);
        const Eigen::VectorXd m_a = ldlt.solve(a);
        const double dnu = (a.dot(m_r) + rp) / a.dot(m_a);
        const Eigen::VectorXd dz = m_r - m_a * dnu;
        const Eigen::VectorXd ds = rhs_s - s.cwiseProduct(dz).cwiseQuotient(z);
        const Eigen::VectorXd dt = rhs_t + t.cwiseProduct(dz).cwiseQuotient(u);

        double step = 1.0;
        for (int i = 0; i < n; ++i) {
            if (dz(i) < 0) step = std::min(step, -z(i) / dz(i));
            if (dz(i) > 0) step = std::min(step, u(i) / dz(i));
            if (ds(i) < 0) step = std::min(step, -s(i) / ds(i));
            if (dt(i) < 0) step = std::min(step, -t(i) / dt(i));
        }
        step = std::min(1.0, 0.99 * step);
        z += step * dz;
        s += step * ds;
        t += step * dt;
        nu += step * dnu;
    }
    QpSvr out;
    out.gamma = gamma;
    out.iterations = it;
    out.beta.resize(l);
    for (int i = 0; i < l; ++i) out.beta[i] = z(i) - z(l + i);
    out.bias = nu;
    return out;
}

}  // namespace oracle
