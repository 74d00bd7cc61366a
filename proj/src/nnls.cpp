// SPDX-License-Identifier: Apache-2.0
#include "hda/nnls.hpp"

#include <algorithm>
#include <cmath>

#include "hda/errors.hpp"

namespace hda {

double top_eigenvalue_gram(const RMatrix& A, int iterations) {
    RVector x = RVector::Ones(A.cols()).normalized();
    double lambda = 0.0;
    for (int k = 0; k < iterations; ++k) {
        RVector y = A.transpose() * (A * x);
        const double next = y.norm();
        if (!(next > 0.0)) return 0.0;
        x = y / next;
        if (std::abs(next - lambda) <= 1e-12 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

double nnls_kkt_residual(const RMatrix& A, const RVector& q, const RVector& g) {
    const RVector grad = A.transpose() * (A * g - q);
    const double scale = (A.transpose() * q).cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double v = g(j) > 0.0 ? std::abs(grad(j)) : std::max(0.0, -grad(j));
        worst = std::max(worst, v);
    }
    return scale > 0.0 ? worst / scale : worst;
}

NnlsResult nnls_solve(const RMatrix& A, const RVector& q, const NnlsOptions& opt) {
    if (A.rows() != q.size()) throw DomainError("A and q have inconsistent shapes");
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) throw DomainError("A is all zero");

    NnlsResult res;
    // Power iteration approaches the top eigenvalue from below; pad slightly.
    res.lipschitz = top_eigenvalue_gram(A, opt.power_iterations) * (1.0 + 1e-6);
    const double step = 1.0 / res.lipschitz;

    RVector g = RVector::Zero(A.cols());
    if (opt.warm_start) {
        if (opt.warm_start->size() != A.cols()) throw DomainError("warm start has wrong length");
        g = opt.warm_start->cwiseMax(0.0);
    }

    RVector y = g;
    RVector g_prev = g;
    double t = 1.0;
    double f_prev = -1.0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        const RVector r = A * y - q;
        const double f = 0.5 * r.squaredNorm();
        const RVector grad = A.transpose() * r;
        g_prev = g;
        g = (y - step * grad).cwiseMax(0.0);

        if (opt.accelerated) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            // restart when the momentum points uphill
            if ((y - g).dot(g - g_prev) > 0.0) {
                t = 1.0;
                y = g;
            } else {
                y = g + ((t - 1.0) / t_next) * (g - g_prev);
                t = t_next;
            }
        } else {
            y = g;
        }

        if (opt.tol > 0.0 && f_prev >= 0.0 && std::abs(f_prev - f) <= opt.tol * std::max(f_prev, 1e-300)) {
            ++it;
            break;
        }
        f_prev = f;
        if (opt.kkt_tol > 0.0 && it % 25 == 24 && nnls_kkt_residual(A, q, g) < opt.kkt_tol) {
            ++it;
            break;
        }
    }
    res.g = std::move(g);
    res.iterations = it;
    res.objective = 0.5 * (A * res.g - q).squaredNorm();
    res.kkt_residual = nnls_kkt_residual(A, q, res.g);
    return res;
}

}  // namespace hda
