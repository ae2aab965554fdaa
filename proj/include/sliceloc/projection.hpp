/**
 * @file projection.hpp
 * @brief Equirectangular panorama math: angular coordinates, depth
 *        back-projection, world-to-reference mapping, per-slice scene
 *        centroids, and the equirectangular-to-pinhole resampling map.
 *
 * World frame: a local metric east-north-up frame anchored at the reference
 * center (X east, Y north, Z up). Zenith angle omega runs from 0 (up) at the
 * panorama's top row to pi (down) at the bottom; azimuth phi from 0 (north)
 * increasing clockwise (east at pi/2).
 */

#ifndef SLICELOC_PROJECTION_HPP
#define SLICELOC_PROJECTION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sliceloc/geometry.hpp"

namespace sliceloc {

/// Equirectangular depth grid in meters; a pixel is valid iff its depth is
/// below `invalid_threshold`.
struct DepthPanorama {
    int width = 0;
    int height = 0;
    std::vector<double> depth_m; ///< row-major, width * height
    double invalid_threshold = 255.0;

    double at(int x, int y) const {
        return depth_m[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(x)];
    }
    bool is_valid(int x, int y) const { return at(x, y) < invalid_threshold; }
};

/// Reference-map georeference: the panorama camera's ground position maps to
/// the reference center; x pixels grow east, y pixels grow south.
struct GeoTransform {
    int ref_width = 640;
    int ref_height = 640;
    double meters_per_pixel = 0.11;
    double camera_east_m = 0.0;  ///< camera ground position, world east
    double camera_north_m = 0.0; ///< camera ground position, world north
};

/// How a panorama is cut into slices.
struct SlicePlan {
    int n = 12;
    double hfov_deg = 90.0;
    double vfov_deg = 90.0;
    double vfov_center_rad = 0.75 * kPi;
    int slice_px = 512;

    /// HFoV center of slice i, exactly 2*pi*i/n.
    double hfov_center_rad(int slice_index) const {
        return 2.0 * kPi * static_cast<double>(slice_index) / static_cast<double>(n);
    }

    void validate() const;
};

/// 3D point in the local metric frame (east, north, up), meters.
struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/**
 * Angular coordinates of a panorama pixel: phi = 2*pi*x/W, omega = pi*y/H.
 * Throws OutOfRange outside [0, W) x [0, H).
 */
std::pair<double, double> panoramic_angles(double x, double y, int width, int height);

/**
 * Back-project a panorama pixel to world coordinates using its depth:
 * camera + depth * (sin w sin p, sin w cos p, cos w). Accepts continuous
 * pixel coordinates (no range check). Throws InvalidDepth for negative depth.
 */
WorldPoint pixel_to_world(double x, double y, double depth_m, WorldPoint camera,
                          int width, int height);

/// Map world east/north meters to reference pixels through the geotransform.
/// Results may fall outside the image; the caller filters.
ImagePoint world_to_reference(double x_m, double y_m, const GeoTransform& geo);

/**
 * Mean reference-pixel position of all valid-depth panorama pixels whose
 * angular coordinates fall inside the slice's HFoV x VFoV window, or nullopt
 * when the window holds no valid pixel.
 */
std::optional<ImagePoint> scene_centroid(const SlicePlan& plan, int slice_index,
                                         const DepthPanorama& pano,
                                         WorldPoint camera_world,
                                         const GeoTransform& geo);

/**
 * Source panorama position (fractional pixels) seen by a destination pixel of
 * the rectified slice. The slice camera yaws to the HFoV center; the VFoV
 * center is reached through a principal-ray row offset, so the center pixel
 * maps to (hfov center, vfov center) and the horizontal edges to exactly
 * +/- hfov/2 in azimuth. Coordinates are continuous.
 */
ImagePoint pinhole_to_pano(const SlicePlan& plan, int slice_index, double u, double v,
                           int pano_width, int pano_height);

/// Full per-destination-pixel map (row-major, slice_px * slice_px entries).
std::vector<ImagePoint> equirect_to_pinhole_map(const SlicePlan& plan, int slice_index,
                                                int pano_width, int pano_height);

/**
 * Depth panorama file I/O: binary PGM, maxval 65535, big-endian samples,
 * meters = sample * 0.01, samples >= 25500 invalid. The header must carry the
 * comment line "# scale=0.01".
 */
DepthPanorama read_depth_pgm(const std::string& path);
void write_depth_pgm(const std::string& path, const DepthPanorama& pano);

} // namespace sliceloc

#endif // SLICELOC_PROJECTION_HPP
