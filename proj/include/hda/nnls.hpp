// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "hda/types.hpp"

namespace hda {

struct NnlsOptions {
    int max_iter = 10000;
    double tol = 1e-12;  // relative change of the objective between iterations; 0 disables
    // Nesterov extrapolation with adaptive restart; same step and projection.
    bool accelerated = false;
    // When > 0, also stop once the normalized KKT residual drops below this.
    double kkt_tol = 0.0;
    std::optional<RVector> warm_start;
    int power_iterations = 200;
};

struct NnlsResult {
    RVector g;
    int iterations = 0;
    double objective = 0.0;     // 0.5 ||A g - q||^2
    double kkt_residual = 0.0;  // normalized by ||A^T q||_inf
    double lipschitz = 0.0;     // estimate of the top eigenvalue of A^T A
};

// Largest eigenvalue of A^T A by power iteration.
double top_eigenvalue_gram(const RMatrix& A, int iterations = 200);

// Normalized KKT residual of g for min ||A g - q||^2, g >= 0.
double nnls_kkt_residual(const RMatrix& A, const RVector& q, const RVector& g);

// Projected gradient with step 1/L. Throws DomainError on an all-zero A or a
// shape mismatch.
NnlsResult nnls_solve(const RMatrix& A, const RVector& q, const NnlsOptions& opt = {});

}  // namespace hda
