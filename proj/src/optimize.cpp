#include "ringlight/optimize.hpp"

#include "ringlight/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ringlight {

ScanResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           double step, double tol) {
    if (!(hi >= lo) || !(step > 0.0) || !(tol > 0.0)) {
        throw InvalidArgument("maximize_scalar: need lo <= hi, step > 0, tol > 0");
    }
    ScanResult out;
    auto eval = [&](double x) {
        const double v = f(x);
        out.trace.emplace_back(x, v);
        return v;
    };
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.x = lo;
    out.value = -INFINITY;
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * step;
        const double v = eval(x);
        if (v > out.value) {
            out.value = v;
            out.x = x;
        }
    }
    double a = std::max(lo, out.x - step);
    double b = std::min(hi, out.x + step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
    }
    for (const auto& [x, v] : out.trace) {
        if (v > out.value) {
            out.value = v;
            out.x = x;
        }
    }
    return out;
}

ScanResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           double step, double tol) {
    ScanResult r = maximize_scalar([&](double x) { return -f(x); }, lo, hi, step, tol);
    r.value = -r.value;
    for (auto& p : r.trace) {
        p.second = -p.second;
    }
    return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) {
        throw InvalidArgument("linspace: need at least one point");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw InvalidArgument("logspace: bounds must be positive");
    }
    std::vector<double> out = linspace(std::log10(lo), std::log10(hi), n);
    for (auto& x : out) {
        x = std::pow(10.0, x);
    }
    return out;
}

} // namespace ringlight
