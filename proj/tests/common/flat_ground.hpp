// Shared test fixture: a synthetic flat-ground depth panorama and the dense
// numeric-integration oracle for per-slice scene centroids.

#ifndef SLICELOC_TESTS_FLAT_GROUND_HPP
#define SLICELOC_TESTS_FLAT_GROUND_HPP

#include <cmath>
#include <optional>

#include "sliceloc/projection.hpp"

namespace sliceloc::testing {

// Slant distance to the ground plane for a camera at `height` looking at
// zenith angle omega; infinite at or above the horizon.
inline double flat_ground_depth(double omega, double height) {
    const double down = -std::cos(omega); // positive below the horizon
    if (down <= 0.0) return std::numeric_limits<double>::infinity();
    return height / down;
}

inline DepthPanorama make_flat_ground_pano(int width, int height_px, double camera_height,
                                           double invalid_threshold) {
    DepthPanorama pano;
    pano.width = width;
    pano.height = height_px;
    pano.invalid_threshold = invalid_threshold;
    pano.depth_m.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height_px));
    for (int y = 0; y < height_px; ++y) {
        const double omega = kPi * y / height_px;
        const double d = flat_ground_depth(omega, camera_height);
        for (int x = 0; x < width; ++x)
            pano.depth_m[static_cast<std::size_t>(y) * width + x] =
                std::isfinite(d) ? std::min(d, 2.0 * invalid_threshold)
                                 : 2.0 * invalid_threshold;
    }
    return pano;
}

// Continuum centroid of the slice's ground footprint by midpoint quadrature
// over the angular window, evaluated straight from the analytic ground model
// (never touching the pixel grid).
inline std::optional<ImagePoint> flat_ground_centroid_oracle(
    const SlicePlan& plan, int slice_index, double camera_height,
    double invalid_threshold, const GeoTransform& geo, int grid = 4096) {
    const double center_phi = plan.hfov_center_rad(slice_index);
    const double half_h = 0.5 * plan.hfov_deg * kDegToRad;
    const double half_v = 0.5 * plan.vfov_deg * kDegToRad;

    double sum_x = 0.0, sum_y = 0.0, weight = 0.0;
    for (int iy = 0; iy < grid; ++iy) {
        const double omega =
            plan.vfov_center_rad - half_v + (iy + 0.5) * (2.0 * half_v / grid);
        if (omega < 0.0 || omega > kPi) continue;
        const double depth = flat_ground_depth(omega, camera_height);
        if (!(depth < invalid_threshold)) continue;
        const double ground = depth * std::sin(omega); // horizontal range, meters
        for (int ix = 0; ix < grid; ++ix) {
            const double phi = center_phi - half_h + (ix + 0.5) * (2.0 * half_h / grid);
            const double east = ground * std::sin(phi);
            const double north = ground * std::cos(phi);
            const ImagePoint ref = world_to_reference(
                geo.camera_east_m + east, geo.camera_north_m + north, geo);
            sum_x += ref.x;
            sum_y += ref.y;
            weight += 1.0;
        }
    }
    if (weight == 0.0) return std::nullopt;
    return ImagePoint{sum_x / weight, sum_y / weight};
}

} // namespace sliceloc::testing

#endif // SLICELOC_TESTS_FLAT_GROUND_HPP
