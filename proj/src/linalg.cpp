#include "ringlight/linalg.hpp"

#include "ringlight/errors.hpp"

#include <complex>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace ringlight {

namespace {

Eigensystem run_zgeev(const CMatrix& a, bool want_vectors) {
    if (a.rows() != a.cols()) {
        throw EigenSolverError("eigensystem: matrix is not square");
    }
    if (!a.allFinite()) {
        throw EigenSolverError("eigensystem: matrix has non-finite entries");
    }
    const auto n = static_cast<lapack_int>(a.rows());
    Eigensystem out;
    out.values.resize(n);
    if (n == 0) {
        return out;
    }
    CMatrix work = a;
    CMatrix vr(want_vectors ? n : 1, want_vectors ? n : 1);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
                                          work.data(), n, out.values.data(), nullptr, 1, vr.data(),
                                          want_vectors ? n : 1);
    if (info != 0) {
        std::ostringstream msg;
        msg << "zgeev failed with info = " << info << " (n = " << n
            << ", max |a_ij| = " << a.cwiseAbs().maxCoeff() << ")";
        throw EigenSolverError(msg.str());
    }
    if (!out.values.allFinite()) {
        throw EigenSolverError("zgeev returned non-finite eigenvalues");
    }
    if (want_vectors) {
        // zgeev already normalizes, renormalize anyway so the contract is local
        vr.colwise().normalize();
        out.vectors = std::move(vr);
    }
    return out;
}

} // namespace

Eigensystem eigensystem(const CMatrix& a) { return run_zgeev(a, true); }

CVector eigenvalues(const CMatrix& a) { return run_zgeev(a, false).values; }

double max_residual(const CMatrix& a, const Eigensystem& es) {
    const CMatrix r = a * es.vectors - es.vectors * es.values.asDiagonal();
    return r.colwise().norm().maxCoeff();
}

} // namespace ringlight
