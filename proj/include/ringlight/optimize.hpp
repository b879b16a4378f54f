#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ringlight {

struct ScanResult {
    double x = 0.0;
    double value = 0.0;
    /// Every (x, f(x)) evaluated, in evaluation order.
    std::vector<std::pair<double, double>> trace;
};

/// Grid scan of [lo, hi] at `step`, then golden-section refinement to `tol`
/// inside the bracket around the best grid point. The grid guards against
/// the multimodal landscapes seen in detuning scans.
ScanResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           double step, double tol = 1e-3);
ScanResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           double step, double tol = 1e-3);

/// n points from lo to hi inclusive, linear or logarithmic.
std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> logspace(double lo, double hi, int n);

} // namespace ringlight
