#include "ringlight/coupling.hpp"

#include "ringlight/errors.hpp"

#include <cmath>
#include <sstream>

namespace ringlight {

namespace {

// (sin x - x cos x) / x^3, series below x = 0.3 where the direct form cancels.
double sinc_residual(double x) {
    if (x < 0.3) {
        const double x2 = x * x;
        return 1.0 / 3.0 +
               x2 * (-1.0 / 30.0 +
                     x2 * (1.0 / 840.0 +
                           x2 * (-1.0 / 45360.0 + x2 * (1.0 / 3991680.0 - x2 / 518918400.0))));
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double sinc(double x) { return x < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

} // namespace

cplx green_projected(const Vec3& r, const CVec3& pn, const CVec3& pm) {
    const double dist = r.norm();
    if (!(dist >= min_separation)) {
        std::ostringstream msg;
        msg << "green_projected: separation " << dist << " below " << min_separation;
        throw SingularSeparation(msg.str());
    }
    const Vec3 u = r / dist;
    const double x = k0 * dist;
    const double x3 = x * x * x;
    const double c = std::cos(x);
    const double s = std::sin(x);

    // e^{ix}(x^2 + ix - 1) / x^3 and e^{ix}(x^2 + 3ix - 3) / x^3
    const double f1 = sinc_residual(x);
    const cplx transverse((c * (x * x - 1.0) - x * s) / x3, sinc(x) - f1);
    const cplx longitudinal((c * (x * x - 3.0) - 3.0 * x * s) / x3, sinc(x) - 3.0 * f1);

    const cplx overlap = pn.dot(pm); // dot() conjugates the first argument
    const cplx proj_n = pn.dot(u.cast<cplx>());
    const cplx proj_m = u.cast<cplx>().dot(pm);
    return k0 / (4.0 * pi) * (transverse * overlap - longitudinal * proj_n * proj_m);
}

CouplingMatrices coupling_matrices(const EmitterEnsemble& ensemble) {
    const auto n = static_cast<Eigen::Index>(ensemble.size());
    CouplingMatrices out;
    out.coherent = RMatrix::Zero(n, n);
    out.dissipative = RMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto& ea = ensemble[static_cast<std::size_t>(a)];
        out.dissipative(a, a) = ea.decay_rate;
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const auto& eb = ensemble[static_cast<std::size_t>(b)];
            const cplx g = green_projected(ea.position - eb.position, ea.polarization, eb.polarization);
            out.coherent(a, b) = out.coherent(b, a) = coherent_coupling(g);
            out.dissipative(a, b) = out.dissipative(b, a) = dissipative_coupling(g);
        }
    }
    return out;
}

} // namespace ringlight
