#include "sliceloc/acontrario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sliceloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-slice geometric errors at a candidate point, PerSliceBearing mode.
std::vector<double> errors_at(std::span<const SlicePose> poses, ImagePoint p) {
    std::vector<double> errs(poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i)
        errs[i] = geometric_error(p, poses[i]);
    return errs;
}

bool near_any_pose(std::span<const SlicePose> poses, ImagePoint p) {
    for (const SlicePose& pose : poses)
        if (distance(pose.location, p) <= kCoincidentTolPx) return true;
    return false;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 64) throw InvalidArity("binomial supports n <= 64 only");
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        // Exact at every step: c * (n-k+i) fits 128 bits and i divides it.
        const unsigned __int128 t =
            static_cast<unsigned __int128>(c) * static_cast<std::uint64_t>(n - k + i);
        c = static_cast<std::uint64_t>(t / static_cast<std::uint64_t>(i));
    }
    return c;
}

double log_epsilon_from_q(double q, int n, int k) {
    if (k < 3 || k > n) throw InvalidArity("log_epsilon requires 3 <= k <= n");
    const double lg_count = std::log10(static_cast<double>(n - 2)) +
                            std::log10(static_cast<double>(binomial(n, k))) +
                            std::log10(static_cast<double>(binomial(k, 2)));
    if (q <= 0.0) return -kInf;
    return lg_count + static_cast<double>(k - 2) * std::log10(q);
}

double log_epsilon(double alpha_deg, int n, int k, const NullModelParams& p) {
    return log_epsilon_from_q(q_cdf(alpha_deg, p), n, k);
}

double rigidity_alpha(std::span<const SlicePose> poses, std::span<const int> subset,
                      ImagePoint camera_location) {
    if (subset.empty()) throw InvalidArity("rigidity_alpha needs a nonempty subset");
    double alpha = 0.0;
    for (int idx : subset)
        alpha = std::max(alpha,
                         geometric_error(camera_location, poses[static_cast<std::size_t>(idx)]));
    return alpha;
}

SubsetResult optimal_subset(std::span<const SlicePose> poses,
                            ImagePoint camera_location, const NullModelParams& p) {
    const int n = static_cast<int>(poses.size());
    if (n < 3) throw InvalidArity("optimal_subset needs at least 3 poses");

    const std::vector<double> errs = errors_at(poses, camera_location);
    std::vector<int> order(poses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return errs[static_cast<std::size_t>(a)] <
                                                errs[static_cast<std::size_t>(b)]; });

    double best_lg = kInf;
    int best_k = 0;
    for (int k = 3; k <= n; ++k) {
        const double alpha = errs[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
        const double lg = log_epsilon(alpha, n, k, p);
        if (lg <= best_lg) { // ties go to the larger subset
            best_lg = lg;
            best_k = k;
        }
    }

    SubsetResult result;
    result.indices.assign(order.begin(), order.begin() + best_k);
    std::sort(result.indices.begin(), result.indices.end());
    result.lg_eps = best_lg;
    result.alpha_deg = errs[static_cast<std::size_t>(order[static_cast<std::size_t>(best_k - 1)])];
    result.k = best_k;
    return result;
}

RigidityResult osa_cvl(std::span<const SlicePose> poses, double tau,
                       const NullModelParams& p, std::optional<ImageBounds> bounds) {
    const int n = static_cast<int>(poses.size());
    if (n < 3) throw InvalidConfig("osa_cvl needs at least 3 poses");

    RigidityResult result;
    result.lg_eps = kInf;
    bool found = false;
    SubsetResult best;
    ImagePoint best_point;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto point = ray_intersection(poses[static_cast<std::size_t>(i)],
                                               poses[static_cast<std::size_t>(j)]);
            if (!point) continue;
            // A sample landing on a pose location has no defined error there;
            // treat it like a non-intersecting pair.
            if (near_any_pose(poses, *point)) continue;
            ++result.pairs_tested;
            SubsetResult sub = optimal_subset(poses, *point, p);
            if (!found || sub.lg_eps < result.lg_eps) {
                found = true;
                result.lg_eps = sub.lg_eps;
                best = std::move(sub);
                best_point = *point;
            }
        }
    }

    if (found) {
        result.inlier_indices = best.indices;
        result.alpha_deg = best.alpha_deg;
    }
    result.valid = found && result.lg_eps < tau;
    if (result.valid) {
        std::vector<SlicePose> subset_poses;
        subset_poses.reserve(best.indices.size());
        for (int idx : best.indices)
            subset_poses.push_back(poses[static_cast<std::size_t>(idx)]);
        const ImagePoint refined = refine_location(subset_poses, best_point);
        result.camera = CameraPose{refined, camera_heading(poses)};
        if (bounds) result.out_of_bounds = bounds->far_outside(refined);
    }
    return result;
}

bool nfa_upper_bound_check(std::span<const SlicePose> poses,
                           ImagePoint camera_location, std::span<const int> subset,
                           const NullModelParams& p) {
    const int n = static_cast<int>(poses.size());
    const int k = static_cast<int>(subset.size());
    if (k < 3 || k > n) return false;

    std::vector<double> errs = errors_at(poses, camera_location);
    std::vector<double> sorted_errs = errs;
    std::sort(sorted_errs.begin(), sorted_errs.end());
    const double alpha = sorted_errs[static_cast<std::size_t>(k - 1)];

    // (a) alpha-rigidity: every member must sit within the k-th ranked error.
    std::vector<double> member_errs;
    member_errs.reserve(subset.size());
    for (int idx : subset) {
        const double e = errs[static_cast<std::size_t>(idx)];
        if (e > alpha + 1e-12) return false;
        member_errs.push_back(e);
    }

    // (b) identity against an independent extended-precision evaluation.
    const double q = q_cdf(alpha, p);
    const double lg = log_epsilon(alpha, n, k, p);
    if (q <= 0.0) {
        if (lg != -kInf) return false;
    } else {
        const unsigned __int128 count = static_cast<unsigned __int128>(n - 2) *
                                        binomial(n, k) * binomial(k, 2);
        const long double direct =
            std::log10(static_cast<long double>(count)) +
            static_cast<long double>(k - 2) * std::log10(static_cast<long double>(q));
        const double rel_scale = std::max(1.0, std::abs(static_cast<double>(direct)));
        if (std::abs(lg - static_cast<double>(direct)) > 1e-9 * rel_scale) return false;
    }

    // (c) monotone bound: Q(alpha)^(k-2) dominates the product over the k-2
    // largest member probabilities (log domain).
    std::sort(member_errs.begin(), member_errs.end(), std::greater<>());
    double rhs = 0.0;
    bool rhs_zero = false;
    for (int i = 0; i < k - 2; ++i) {
        const double qi = q_cdf(member_errs[static_cast<std::size_t>(i)], p);
        if (qi <= 0.0) {
            rhs_zero = true;
            break;
        }
        rhs += std::log10(qi);
    }
    if (rhs_zero) return true; // product is zero, any power of Q dominates
    if (q <= 0.0) return false;
    const double lhs = static_cast<double>(k - 2) * std::log10(q);
    return lhs >= rhs - 1e-12;
}

} // namespace sliceloc
