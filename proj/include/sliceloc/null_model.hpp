/**
 * @file null_model.hpp
 * @brief Piecewise angular-error density q(theta) of the null hypothesis and
 *        its calibration from simulated naive poses.
 *
 * q is constant on [0, t1), linear on [t1, t2), zero beyond t2; all angles in
 * degrees. Q is the normalized CDF, Q(theta) = (1/K) * integral of q.
 */

#ifndef SLICELOC_NULL_MODEL_HPP
#define SLICELOC_NULL_MODEL_HPP

#include <span>

#include "sliceloc/errors.hpp"

namespace sliceloc {

struct NullModelParams {
    double t1 = 0.0; ///< end of the constant branch, degrees
    double t2 = 0.0; ///< end of the linear branch, degrees
    double A = 0.0;  ///< linear-branch slope, density per degree
    double B = 0.0;  ///< linear-branch intercept
    double C = 0.0;  ///< constant density on [0, t1)
    double K = 0.0;  ///< normalization, integral of q over [0, t2)

    /**
     * Default parameters with t1 = 50, t2 = 132, A = -6.7e-5 and the
     * intercept re-derived from the zero-at-t2 condition B = -A * t2, so the
     * density stays nonnegative over the whole linear branch.
     */
    static NullModelParams corrected_defaults();

    /**
     * Legacy (t1, t2, A, B) tuple kept loadable for comparison. This
     * parameterization makes q negative on most of [t1, t2) and fails
     * is_valid(); prefer corrected_defaults().
     */
    static NullModelParams printed_defaults();

    /// Build params from (t1, t2, A, B); C and K follow from the invariants.
    static NullModelParams from_linear(double t1, double t2, double A, double B);

    /// True iff 0 < t1 < t2 <= 180, q >= 0 on [0, t2), C = A*t1 + B, K > 0.
    bool is_valid() const;
};

/// Density q(theta): C on [0, t1), A*theta + B on [t1, t2), 0 on [t2, inf).
double q_density(double theta_deg, const NullModelParams& p);

/// CDF Q(theta) in [0, 1]; Q(0) = 0 and Q(theta >= t2) = 1 exactly.
double q_cdf(double theta_deg, const NullModelParams& p);

/**
 * Fit the piecewise density to angular-error samples using 1-degree bins:
 * least-squares line on the bin densities of [t1, t2), intercept raised
 * minimally so the density stays nonnegative, C tied to the line at t1 for
 * continuity, K from the closed-form integral.
 *
 * Throws InsufficientSamples below 10^4 samples and DegenerateFit when fewer
 * than 3 bins in [t1, t2) are nonempty or the fit has no mass.
 */
NullModelParams calibrate(std::span<const double> theta_samples_deg,
                          double t1, double t2);

} // namespace sliceloc

#endif // SLICELOC_NULL_MODEL_HPP
