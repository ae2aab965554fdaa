/**
 * @file geometry.hpp
 * @brief Planar bearing/ray math for slice-based camera localization.
 *
 * Coordinate conventions, fixed once for the whole library:
 *  - Image coordinates: x grows east, y grows south (image rows point down).
 *  - Compass bearings: degrees in [0, 360), 0 = true north, clockwise.
 *    North therefore maps to the image-space unit vector (0, -1) and a
 *    bearing b maps to (sin b, -cos b).
 *  - Slice HFoV centers are radians, c_i = 2*pi*i/n for slice i of n.
 */

#ifndef SLICELOC_GEOMETRY_HPP
#define SLICELOC_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "sliceloc/errors.hpp"

namespace sliceloc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Two points closer than this (in pixels) are treated as coincident.
inline constexpr double kCoincidentTolPx = 1e-9;
/// Ray directions with |cross| below this are treated as parallel.
inline constexpr double kParallelTol = 1e-9;
/// Angles below this (degrees) collapse to exact zero: double-precision
/// bearing/vector round trips cannot distinguish them from perfect alignment,
/// and exact zeros carry meaning downstream (Q(0) = 0).
inline constexpr double kAngleZeroSnapDeg = 1e-11;

/// Normalize an angle in degrees into [0, 360).
inline double normalize_deg(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d < 0.0) d += 360.0;
    if (d >= 360.0) d = 0.0; // fmod rounding can land exactly on 360
    return d;
}

/// Absolute circular difference between two angles in degrees, in [0, 180].
inline double circular_diff_deg(double a_deg, double b_deg) {
    double d = std::fmod(a_deg - b_deg, 360.0);
    if (d < -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return std::abs(d);
}

/// 2D vector in image coordinates (x east, y south).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Pixel position in the reference image (x east-positive, y south-positive).
struct ImagePoint {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(ImagePoint a, ImagePoint b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/**
 * Compass bearing: degrees in [0, 360), 0 = true north, increasing clockwise.
 * Always stored normalized.
 */
class CompassBearing {
public:
    CompassBearing() = default;
    explicit CompassBearing(double deg) : deg_(normalize_deg(deg)) {}

    double degrees() const { return deg_; }
    double radians() const { return deg_ * kDegToRad; }

    /// Bearing rotated clockwise by `delta_deg` (may be negative), renormalized.
    CompassBearing rotated(double delta_deg) const {
        return CompassBearing(deg_ + delta_deg);
    }

private:
    double deg_ = 0.0;
};

/**
 * One redundant observation: the scene location of a slice in reference-map
 * pixels, the scene-to-camera compass bearing, and the slice's HFoV center.
 */
struct SlicePose {
    int slice_index = 0;
    ImagePoint location;          ///< scene position p_i in reference pixels
    CompassBearing scene_bearing; ///< direction from scene to camera
    double hfov_center_rad = 0.0; ///< slicing angle c_i = 2*pi*i/n
};

/// Planar camera pose: location in reference pixels plus compass heading.
struct CameraPose {
    ImagePoint location;
    CompassBearing heading;
};

/**
 * Ring-segment region: points at distance [inner_radius, outer_radius] from
 * `origin` whose bearing lies within `half_angle_deg` of `axis`.
 */
struct AnnularSector {
    ImagePoint origin;
    double inner_radius = 0.0; ///< d1, pixels
    double outer_radius = 0.0; ///< d2, pixels
    CompassBearing axis;
    double half_angle_deg = 0.0;

    /// Throws InvalidConfig unless 0 <= d1 < d2 and 0 < half_angle <= 180.
    void validate() const;
};

/// Which expected ray the geometric error is measured against.
enum class ErrorMode {
    PerSliceBearing, ///< expected ray from the slice's own scene bearing
    GlobalHeading,   ///< expected ray from a global heading + HFoV center
};

/// Unit vector in image coordinates for a compass bearing: (sin b, -cos b).
inline Vec2 bearing_to_vector(CompassBearing b) {
    const double r = b.radians();
    return Vec2{std::sin(r), -std::cos(r)};
}

/// Inverse of bearing_to_vector. `v` need not be unit length but not zero.
inline CompassBearing vector_to_bearing(Vec2 v) {
    return CompassBearing(std::atan2(v.x, -v.y) * kRadToDeg);
}

/**
 * Angle in degrees [0, 180] between the observed camera->scene direction and
 * the expected central imaging ray of the slice.
 *
 * PerSliceBearing: expected ray is the reverse of the scene-to-camera bearing.
 * GlobalHeading:   expected ray is heading + hfov_center (heading required).
 *
 * Angles below kAngleZeroSnapDeg collapse to exact zero. Throws
 * DegenerateGeometry when the camera coincides with the scene point
 * (distance <= 1e-9 px).
 */
double geometric_error(ImagePoint camera_location, const SlicePose& pose,
                       ErrorMode mode = ErrorMode::PerSliceBearing,
                       std::optional<CompassBearing> heading = std::nullopt);

/**
 * Intersection of the two scene-to-camera rays, or nullopt when the rays are
 * parallel (|cross| < 1e-9) or the intersection lies behind either ray
 * (s <= 0 or t <= 0). At a returned point both poses have geometric error 0.
 */
std::optional<ImagePoint> ray_intersection(const SlicePose& a, const SlicePose& b);

/**
 * Camera location minimizing the summed angular error over `poses`
 * (PerSliceBearing mode). Initialized by linear least squares on the
 * perpendicular distances to the scene-to-camera rays (or `init` when given),
 * then refined locally on the angular objective. Never worse than the best
 * iterate seen.
 *
 * Throws DegenerateGeometry when fewer than 2 poses are given or all rays are
 * parallel within tolerance (rank-deficient normal matrix).
 */
ImagePoint refine_location(std::span<const SlicePose> poses,
                           std::optional<ImagePoint> init = std::nullopt);

/**
 * Camera heading as the circular mean of the de-rotated per-slice headings
 * psi_i = scene_bearing_i + 180 - deg(hfov_center_i), over all poses.
 *
 * Throws UndefinedMean when the resultant vector norm is below 1e-12.
 */
CompassBearing camera_heading(std::span<const SlicePose> poses);

/**
 * Annular search sector for a slice's scene position under flat-ground
 * trigonometry. The inner radius comes from the steepest viewing ray, the
 * outer from the shallowest; depression angles are clamped to [0.5, 90] deg
 * on the shallow end and <= 90 deg on the steep end.
 *
 * Throws InvalidConfig on bad inputs or when clamping yields d1 >= d2.
 */
AnnularSector search_region(ImagePoint prior_center, double hfov_center_rad,
                            CompassBearing heading_prior, double prior_half_width_deg,
                            double camera_height_m, double vfov_deg,
                            double vfov_center_zenith_deg, double meters_per_pixel,
                            double max_radius_px, double hfov_deg = 90.0);

/// True iff `p` lies inside the annular sector (radii and angle inclusive).
bool point_in_sector(ImagePoint p, const AnnularSector& s);

} // namespace sliceloc

#endif // SLICELOC_GEOMETRY_HPP
