#include "sliceloc/null_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sliceloc {

namespace {

double normalization(double t1, double t2, double A, double B, double C) {
    return C * t1 + 0.5 * A * (t2 * t2 - t1 * t1) + B * (t2 - t1);
}

} // namespace

NullModelParams NullModelParams::from_linear(double t1, double t2, double A, double B) {
    NullModelParams p;
    p.t1 = t1;
    p.t2 = t2;
    p.A = A;
    p.B = B;
    p.C = A * t1 + B;
    p.K = normalization(t1, t2, A, B, p.C);
    return p;
}

NullModelParams NullModelParams::corrected_defaults() {
    const double t1 = 50.0, t2 = 132.0, A = -6.7e-5;
    return from_linear(t1, t2, A, -A * t2);
}

NullModelParams NullModelParams::printed_defaults() {
    return from_linear(50.0, 132.0, -6.7e-5, 8.8e-4);
}

bool NullModelParams::is_valid() const {
    if (!(t1 > 0.0 && t1 < t2 && t2 <= 180.0)) return false;
    if (!(C >= 0.0)) return false;
    // Linear branch nonnegative at both ends covers the whole interval.
    if (A * t1 + B < 0.0 || A * t2 + B < 0.0) return false;
    if (std::abs(C - (A * t1 + B)) > 1e-12 * std::max(1.0, std::abs(C)))
        return false;
    return K > 0.0 && std::abs(K - normalization(t1, t2, A, B, C)) <=
                          1e-9 * std::max(1.0, K);
}

double q_density(double theta_deg, const NullModelParams& p) {
    if (theta_deg < 0.0) return 0.0;
    if (theta_deg < p.t1) return p.C;
    if (theta_deg < p.t2) return p.A * theta_deg + p.B;
    return 0.0;
}

double q_cdf(double theta_deg, const NullModelParams& p) {
    if (theta_deg <= 0.0) return 0.0;
    if (theta_deg >= p.t2) return 1.0;
    double acc;
    if (theta_deg < p.t1) {
        acc = p.C * theta_deg;
    } else {
        acc = p.C * p.t1 +
              0.5 * p.A * (theta_deg * theta_deg - p.t1 * p.t1) +
              p.B * (theta_deg - p.t1);
    }
    return acc / p.K;
}

NullModelParams calibrate(std::span<const double> theta_samples_deg,
                          double t1, double t2) {
    if (theta_samples_deg.size() < 10000)
        throw InsufficientSamples("calibration needs at least 10^4 samples");
    if (!(t1 > 0.0 && t1 < t2))
        throw InvalidConfig("calibration requires 0 < t1 < t2");

    // 1-degree bins over [0, t2). Samples at or beyond t2 belong to the zero
    // branch and do not enter the fit.
    const int n_bins = static_cast<int>(std::ceil(t2));
    std::vector<double> density(static_cast<std::size_t>(n_bins), 0.0);
    const double inv_n = 1.0 / static_cast<double>(theta_samples_deg.size());
    for (double theta : theta_samples_deg) {
        if (theta < 0.0 || theta >= t2) continue;
        const int bin = static_cast<int>(theta);
        if (bin >= 0 && bin < n_bins) density[static_cast<std::size_t>(bin)] += inv_n;
    }

    // Bins fully inside the linear branch.
    const int lin_begin = static_cast<int>(std::ceil(t1));
    const int lin_end = static_cast<int>(std::floor(t2));

    int nonempty = 0;
    for (int b = lin_begin; b < lin_end; ++b)
        if (density[static_cast<std::size_t>(b)] > 0.0) ++nonempty;
    if (nonempty < 3)
        throw DegenerateFit("fewer than 3 nonempty bins in the linear region");

    // Least squares A*theta + B on the linear-region bin centers.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int b = lin_begin; b < lin_end; ++b) {
        const double x = b + 0.5;
        const double y = density[static_cast<std::size_t>(b)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double det = count * sxx - sx * sx;
    if (std::abs(det) < 1e-12)
        throw DegenerateFit("linear-region bins do not determine a slope");
    double A = (count * sxy - sx * sy) / det;
    double B = (sy * sxx - sx * sxy) / det;

    // Raise the intercept minimally so the density is nonnegative on [t1, t2].
    const double lowest = std::min(A * t1 + B, A * t2 + B);
    if (lowest < 0.0) B -= lowest;

    NullModelParams p = NullModelParams::from_linear(t1, t2, A, B);
    if (!(p.K > 0.0)) throw DegenerateFit("fitted density has no mass");
    return p;
}

} // namespace sliceloc
