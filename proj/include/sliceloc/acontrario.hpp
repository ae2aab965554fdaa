/**
 * @file acontrario.hpp
 * @brief Rigidity-ranked robust estimation with an a-contrario meaningfulness
 *        bound for slice-based localization.
 *
 * A k-subset of n slice poses that is alpha-rigid at a candidate camera point
 * has its number of false alarms bounded by
 *
 *     eps(alpha, n, k) = (n-2) * C(n,k) * C(k,2) * Q(alpha)^(k-2)
 *
 * with Q the null-model CDF. The estimator samples camera candidates from all
 * intersecting pose pairs, keeps the subset minimizing lg(eps), and declares
 * the localization valid when lg(eps) falls below the threshold tau.
 */

#ifndef SLICELOC_ACONTRARIO_HPP
#define SLICELOC_ACONTRARIO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sliceloc/geometry.hpp"
#include "sliceloc/null_model.hpp"

namespace sliceloc {

/// Reference-image rectangle used only to flag out-of-bounds refinements.
struct ImageBounds {
    double width = 640.0;
    double height = 640.0;
    /// Refined locations farther than this fraction of width/height outside
    /// the rectangle are flagged (closer overshoots are tolerated silently).
    double margin_frac = 0.10;

    bool far_outside(ImagePoint p) const {
        const double mx = margin_frac * width;
        const double my = margin_frac * height;
        return p.x < -mx || p.x >= width + mx || p.y < -my || p.y >= height + my;
    }
};

/// Output of the full estimator.
struct RigidityResult {
    std::vector<int> inlier_indices; ///< winning subset, ascending slice order
    double alpha_deg = 0.0;          ///< rigidity of the winning subset
    double lg_eps = 0.0;             ///< log10 NFA bound; -inf/+inf sentinels
    std::optional<CameraPose> camera; ///< present iff valid
    bool valid = false;              ///< lg_eps < tau
    int pairs_tested = 0;            ///< pose pairs that yielded a camera sample
    bool out_of_bounds = false;      ///< refined location far outside the image
};

/// Max geometric error over `subset` at `camera_location` (degrees).
double rigidity_alpha(std::span<const SlicePose> poses, std::span<const int> subset,
                      ImagePoint camera_location);

/// Exact-combinatorics binomial coefficient, valid for 0 <= k <= n <= 64.
std::uint64_t binomial(int n, int k);

/**
 * log10 of eps(alpha, n, k) with Q evaluated from the null model; -infinity
 * when Q(alpha) = 0. Throws InvalidArity unless 3 <= k <= n.
 */
double log_epsilon(double alpha_deg, int n, int k, const NullModelParams& p);

/// Same bound with the null probability passed directly.
double log_epsilon_from_q(double q, int n, int k);

/// Result of the per-candidate subset scan.
struct SubsetResult {
    std::vector<int> indices; ///< ascending slice order
    double lg_eps = 0.0;
    double alpha_deg = 0.0;
    int k = 0;
};

/**
 * Best subset at a fixed camera point: poses are ranked by geometric error
 * and every prefix of size k = 3..n is scored with log_epsilon of its worst
 * member; the minimizing prefix wins, ties going to larger k.
 */
SubsetResult optimal_subset(std::span<const SlicePose> poses,
                            ImagePoint camera_location, const NullModelParams& p);

/**
 * Full estimator: camera candidates from all intersecting pose pairs in
 * lexicographic index order, the per-candidate optimal subset, and a global
 * strict-minimum reduction over lg(eps). Below tau the location is refined
 * over the winning subset and the heading averaged over all poses; otherwise
 * the result is invalid and carries no camera. With no usable pair the result
 * is invalid with pairs_tested = 0 and a +infinity sentinel.
 */
RigidityResult osa_cvl(std::span<const SlicePose> poses, double tau,
                       const NullModelParams& p,
                       std::optional<ImageBounds> bounds = std::nullopt);

/**
 * Sanity check of the NFA bound at an optimal_subset output: the subset must
 * be alpha-rigid for the prefix alpha, log_epsilon must match an independent
 * extended-precision evaluation, and Q(alpha)^(k-2) must dominate the product
 * of the k-2 largest member probabilities.
 */
bool nfa_upper_bound_check(std::span<const SlicePose> poses,
                           ImagePoint camera_location, std::span<const int> subset,
                           const NullModelParams& p);

} // namespace sliceloc

#endif // SLICELOC_ACONTRARIO_HPP
