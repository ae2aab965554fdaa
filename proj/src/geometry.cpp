#include "sliceloc/geometry.hpp"

#include <algorithm>
#include <array>

namespace sliceloc {

void AnnularSector::validate() const {
    if (!(inner_radius >= 0.0) || !(inner_radius < outer_radius))
        throw InvalidConfig("annular sector requires 0 <= d1 < d2");
    if (!(half_angle_deg > 0.0) || !(half_angle_deg <= 180.0))
        throw InvalidConfig("annular sector requires 0 < half_angle <= 180");
}

double geometric_error(ImagePoint camera_location, const SlicePose& pose,
                       ErrorMode mode, std::optional<CompassBearing> heading) {
    const Vec2 d{pose.location.x - camera_location.x,
                 pose.location.y - camera_location.y};
    const double dist = norm(d);
    if (dist <= kCoincidentTolPx)
        throw DegenerateGeometry("camera coincides with slice scene position");

    Vec2 expected;
    if (mode == ErrorMode::GlobalHeading) {
        if (!heading)
            throw InvalidConfig("GlobalHeading mode requires a heading");
        expected = bearing_to_vector(
            heading->rotated(pose.hfov_center_rad * kRadToDeg));
    } else {
        expected = bearing_to_vector(pose.scene_bearing.rotated(180.0));
    }

    const double c = dot(d, expected);
    const double s = cross(d, expected);
    const double angle = std::atan2(std::abs(s), c) * kRadToDeg;
    return angle < kAngleZeroSnapDeg ? 0.0 : angle;
}

std::optional<ImagePoint> ray_intersection(const SlicePose& a, const SlicePose& b) {
    const Vec2 va = bearing_to_vector(a.scene_bearing);
    const Vec2 vb = bearing_to_vector(b.scene_bearing);
    const double denom = cross(va, vb);
    if (std::abs(denom) < kParallelTol) return std::nullopt;

    const Vec2 d{b.location.x - a.location.x, b.location.y - a.location.y};
    const double s = cross(d, vb) / denom;
    const double t = cross(d, va) / denom;
    if (s <= 0.0 || t <= 0.0) return std::nullopt; // behind one of the rays
    return ImagePoint{a.location.x + s * va.x, a.location.y + s * va.y};
}

namespace {

// Summed angular error; a pose coincident with p contributes the worst case
// so the optimizer never settles on a scene point.
double angular_objective(ImagePoint p, std::span<const SlicePose> poses) {
    double total = 0.0;
    for (const SlicePose& pose : poses) {
        const Vec2 d{pose.location.x - p.x, pose.location.y - p.y};
        const double dist = norm(d);
        if (dist <= kCoincidentTolPx) {
            total += 180.0;
            continue;
        }
        const Vec2 e = bearing_to_vector(pose.scene_bearing.rotated(180.0));
        total += std::atan2(std::abs(cross(d, e)), dot(d, e)) * kRadToDeg;
    }
    return total;
}

} // namespace

ImagePoint refine_location(std::span<const SlicePose> poses,
                           std::optional<ImagePoint> init) {
    const std::size_t n = poses.size();
    if (n < 2) throw DegenerateGeometry("refine_location needs at least 2 poses");

    // Normal equations of sum_i |(I - v_i v_i^T)(p - p_i)|^2.
    double m00 = 0, m01 = 0, m11 = 0, r0 = 0, r1 = 0;
    for (const SlicePose& pose : poses) {
        const Vec2 v = bearing_to_vector(pose.scene_bearing);
        const double axx = 1.0 - v.x * v.x;
        const double axy = -v.x * v.y;
        const double ayy = 1.0 - v.y * v.y;
        m00 += axx;
        m01 += axy;
        m11 += ayy;
        r0 += axx * pose.location.x + axy * pose.location.y;
        r1 += axy * pose.location.x + ayy * pose.location.y;
    }
    const double det = m00 * m11 - m01 * m01;
    if (std::abs(det) < 1e-12 * static_cast<double>(n * n))
        throw DegenerateGeometry("all scene-to-camera rays are parallel");

    ImagePoint current;
    if (init) {
        current = *init;
    } else {
        current = ImagePoint{(m11 * r0 - m01 * r1) / det,
                             (m00 * r1 - m01 * r0) / det};
    }

    // Derivative-free local descent: compass moves at a shrinking step.
    // Step starts at a small fraction of the scene distances so the search
    // scales with the instance.
    std::vector<double> dists;
    dists.reserve(n);
    for (const SlicePose& pose : poses)
        dists.push_back(distance(pose.location, current));
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
    double step = std::max(1e-6, 0.02 * dists[dists.size() / 2]);

    static constexpr std::array<Vec2, 8> kDirections{{{1, 0},
                                                      {-1, 0},
                                                      {0, 1},
                                                      {0, -1},
                                                      {1, 1},
                                                      {1, -1},
                                                      {-1, 1},
                                                      {-1, -1}}};

    double best_value = angular_objective(current, poses);
    constexpr int kMaxLevels = 50;
    constexpr double kDecreaseTol = 1e-8; // degrees
    for (int level = 0; level < kMaxLevels; ++level) {
        const double level_start = best_value;
        bool moved = true;
        while (moved) {
            moved = false;
            ImagePoint best_move = current;
            double best_move_value = best_value;
            for (const Vec2& dir : kDirections) {
                const ImagePoint cand{current.x + step * dir.x,
                                      current.y + step * dir.y};
                const double value = angular_objective(cand, poses);
                if (value < best_move_value) {
                    best_move_value = value;
                    best_move = cand;
                }
            }
            if (best_move_value < best_value) {
                best_value = best_move_value;
                current = best_move;
                moved = true;
            }
        }
        if (level_start - best_value < kDecreaseTol && step <= 1e-7) break;
        step *= 0.5;
    }
    return current;
}

CompassBearing camera_heading(std::span<const SlicePose> poses) {
    double sum_sin = 0.0;
    double sum_cos = 0.0;
    for (const SlicePose& pose : poses) {
        const double psi_deg = pose.scene_bearing.degrees() + 180.0 -
                               pose.hfov_center_rad * kRadToDeg;
        const double psi = psi_deg * kDegToRad;
        sum_sin += std::sin(psi);
        sum_cos += std::cos(psi);
    }
    if (std::hypot(sum_sin, sum_cos) < 1e-12)
        throw UndefinedMean("per-slice headings have no mean direction");
    return CompassBearing(std::atan2(sum_sin, sum_cos) * kRadToDeg);
}

AnnularSector search_region(ImagePoint prior_center, double hfov_center_rad,
                            CompassBearing heading_prior, double prior_half_width_deg,
                            double camera_height_m, double vfov_deg,
                            double vfov_center_zenith_deg, double meters_per_pixel,
                            double max_radius_px, double hfov_deg) {
    if (!(camera_height_m > 0.0)) throw InvalidConfig("camera height must be > 0");
    if (!(vfov_deg > 0.0) || !(vfov_deg <= 180.0))
        throw InvalidConfig("vfov must be in (0, 180]");
    if (!(meters_per_pixel > 0.0)) throw InvalidConfig("meters_per_pixel must be > 0");

    // Depression angles below horizontal, steepest from the bottom of the
    // VFoV, shallowest from the top. Shallow rays near the horizon are
    // clamped to 0.5 deg so the ground distance stays finite.
    double delta_max = vfov_center_zenith_deg + vfov_deg / 2.0 - 90.0;
    delta_max = std::min(delta_max, 90.0);
    if (delta_max <= 0.0)
        throw InvalidConfig("slice VFoV never looks below the horizon");
    double delta_min = vfov_center_zenith_deg - vfov_deg / 2.0 - 90.0;
    delta_min = std::max(delta_min, 0.5);

    const auto ground_px = [&](double delta_deg) {
        return camera_height_m / std::tan(delta_deg * kDegToRad) / meters_per_pixel;
    };
    const double d1 = (delta_max >= 90.0) ? 0.0 : ground_px(delta_max);
    double d2 = ground_px(delta_min);
    d2 = std::min(d2, max_radius_px);
    if (d1 >= d2)
        throw InvalidConfig("clamped view geometry yields an empty annulus");

    AnnularSector sector;
    sector.origin = prior_center;
    sector.inner_radius = d1;
    sector.outer_radius = d2;
    sector.axis = heading_prior.rotated(hfov_center_rad * kRadToDeg);
    // A half-angle of 180 already covers the full ring.
    sector.half_angle_deg = std::min(hfov_deg / 2.0 + prior_half_width_deg, 180.0);
    sector.validate();
    return sector;
}

bool point_in_sector(ImagePoint p, const AnnularSector& s) {
    const double dx = p.x - s.origin.x;
    const double dy = p.y - s.origin.y;
    const double dist = std::hypot(dx, dy);
    if (dist < s.inner_radius || dist > s.outer_radius) return false;
    if (dist <= kCoincidentTolPx) return s.inner_radius <= 0.0;
    const double bearing = vector_to_bearing(Vec2{dx, dy}).degrees();
    return circular_diff_deg(bearing, s.axis.degrees()) <= s.half_angle_deg;
}

} // namespace sliceloc
