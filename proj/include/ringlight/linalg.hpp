#pragma once

#include "ringlight/types.hpp"

namespace ringlight {

/// Right eigenpairs of a general complex matrix; columns of `vectors` have
/// unit 2-norm.
struct Eigensystem {
    CVector values;
    CMatrix vectors;
};

/// Dense eigendecomposition through LAPACK zgeev. Throws EigenSolverError on
/// failure or non-finite output.
Eigensystem eigensystem(const CMatrix& a);

/// Eigenvalues only (zgeev without vectors).
CVector eigenvalues(const CMatrix& a);

/// max_i ||A v_i - lambda_i v_i||.
double max_residual(const CMatrix& a, const Eigensystem& es);

} // namespace ringlight
