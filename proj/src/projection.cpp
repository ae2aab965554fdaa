#include "sliceloc/projection.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace sliceloc {

namespace {

// Absolute circular difference of two azimuths in radians, result in [0, pi].
double circular_diff_rad(double a, double b) {
    double d = std::fmod(a - b, 2.0 * kPi);
    if (d < -kPi) d += 2.0 * kPi;
    if (d > kPi) d -= 2.0 * kPi;
    return std::abs(d);
}

} // namespace

void SlicePlan::validate() const {
    if (n < 1) throw InvalidConfig("slice plan needs n >= 1");
    if (!(hfov_deg > 0.0 && hfov_deg <= 180.0))
        throw InvalidConfig("slice hfov must be in (0, 180]");
    if (!(vfov_deg > 0.0 && vfov_deg <= 180.0))
        throw InvalidConfig("slice vfov must be in (0, 180]");
    if (!(vfov_center_rad >= 0.0 && vfov_center_rad <= kPi))
        throw InvalidConfig("vfov center must be in [0, pi]");
    if (slice_px < 2) throw InvalidConfig("slice size must be >= 2 px");
}

std::pair<double, double> panoramic_angles(double x, double y, int width, int height) {
    if (!(x >= 0.0 && x < static_cast<double>(width)) ||
        !(y >= 0.0 && y < static_cast<double>(height)))
        throw OutOfRange("panorama pixel outside [0,W) x [0,H)");
    return {2.0 * kPi * x / static_cast<double>(width),
            kPi * y / static_cast<double>(height)};
}

WorldPoint pixel_to_world(double x, double y, double depth_m, WorldPoint camera,
                          int width, int height) {
    if (!(depth_m >= 0.0)) throw InvalidDepth("depth must be nonnegative");
    const double phi = 2.0 * kPi * x / static_cast<double>(width);
    const double omega = kPi * y / static_cast<double>(height);
    return WorldPoint{camera.x + depth_m * std::sin(omega) * std::sin(phi),
                      camera.y + depth_m * std::sin(omega) * std::cos(phi),
                      camera.z + depth_m * std::cos(omega)};
}

ImagePoint world_to_reference(double x_m, double y_m, const GeoTransform& geo) {
    const double rel_east = x_m - geo.camera_east_m;
    const double rel_north = y_m - geo.camera_north_m;
    return ImagePoint{static_cast<double>(geo.ref_width) / 2.0 +
                          rel_east / geo.meters_per_pixel,
                      static_cast<double>(geo.ref_height) / 2.0 -
                          rel_north / geo.meters_per_pixel};
}

std::optional<ImagePoint> scene_centroid(const SlicePlan& plan, int slice_index,
                                         const DepthPanorama& pano,
                                         WorldPoint camera_world,
                                         const GeoTransform& geo) {
    plan.validate();
    if (slice_index < 0 || slice_index >= plan.n)
        throw OutOfRange("slice index outside [0, n)");

    const double center_phi = plan.hfov_center_rad(slice_index);
    const double half_h = 0.5 * plan.hfov_deg * kDegToRad;
    const double half_v = 0.5 * plan.vfov_deg * kDegToRad;

    double sum_x = 0.0, sum_y = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < pano.height; ++y) {
        const double omega = kPi * static_cast<double>(y) / static_cast<double>(pano.height);
        if (std::abs(omega - plan.vfov_center_rad) > half_v) continue;
        for (int x = 0; x < pano.width; ++x) {
            if (!pano.is_valid(x, y)) continue;
            const double phi = 2.0 * kPi * static_cast<double>(x) /
                               static_cast<double>(pano.width);
            if (circular_diff_rad(phi, center_phi) > half_h) continue;
            const WorldPoint w = pixel_to_world(x, y, pano.at(x, y), camera_world,
                                                pano.width, pano.height);
            const ImagePoint ref = world_to_reference(w.x, w.y, geo);
            sum_x += ref.x;
            sum_y += ref.y;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return ImagePoint{sum_x / static_cast<double>(count),
                      sum_y / static_cast<double>(count)};
}

ImagePoint pinhole_to_pano(const SlicePlan& plan, int slice_index, double u, double v,
                           int pano_width, int pano_height) {
    const double half = (static_cast<double>(plan.slice_px) - 1.0) / 2.0;
    const double f = half / std::tan(0.5 * plan.hfov_deg * kDegToRad);
    const double du = u - half;
    const double dv = v - half;

    // Yaw-aligned slice frame: x right (east-relative), y forward, z up.
    // The principal ray is depressed to the VFoV center by a row offset.
    const double pitch = plan.vfov_center_rad - 0.5 * kPi;
    const double z = -dv - f * std::tan(pitch);
    const double horizontal = std::hypot(du, f);

    double phi = plan.hfov_center_rad(slice_index) + std::atan2(du, f);
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    const double omega = std::atan2(horizontal, z); // in [0, pi]

    return ImagePoint{phi * static_cast<double>(pano_width) / (2.0 * kPi),
                      omega * static_cast<double>(pano_height) / kPi};
}

std::vector<ImagePoint> equirect_to_pinhole_map(const SlicePlan& plan, int slice_index,
                                                int pano_width, int pano_height) {
    plan.validate();
    if (slice_index < 0 || slice_index >= plan.n)
        throw OutOfRange("slice index outside [0, n)");
    std::vector<ImagePoint> map;
    map.reserve(static_cast<std::size_t>(plan.slice_px) *
                static_cast<std::size_t>(plan.slice_px));
    for (int v = 0; v < plan.slice_px; ++v)
        for (int u = 0; u < plan.slice_px; ++u)
            map.push_back(pinhole_to_pano(plan, slice_index, u, v, pano_width,
                                          pano_height));
    return map;
}

// ---------------------------------------------------------------------------
// 16-bit PGM depth I/O
// ---------------------------------------------------------------------------

namespace {

constexpr double kDepthScale = 0.01; // meters per sample unit

// Next whitespace-delimited token, collecting comment lines along the way.
std::string next_token(std::istream& in, std::vector<std::string>& comments) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            comments.push_back(line);
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

bool has_scale_comment(const std::vector<std::string>& comments) {
    for (const std::string& c : comments) {
        std::string trimmed;
        for (char ch : c)
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed.push_back(ch);
        if (trimmed == "scale=0.01") return true;
    }
    return false;
}

} // namespace

DepthPanorama read_depth_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open depth panorama: " + path);

    std::vector<std::string> comments;
    if (next_token(in, comments) != "P5")
        throw ParseError("depth panorama must be binary PGM (P5)");
    const std::string ws = next_token(in, comments);
    const std::string hs = next_token(in, comments);
    const std::string ms = next_token(in, comments);
    int width = 0, height = 0;
    long maxval = 0;
    try {
        width = std::stoi(ws);
        height = std::stoi(hs);
        maxval = std::stol(ms);
    } catch (const std::exception&) {
        throw ParseError("malformed PGM header in " + path);
    }
    if (width <= 0 || height <= 0) throw ParseError("bad PGM dimensions in " + path);
    if (maxval != 65535) throw ParseError("depth PGM must have maxval 65535");
    if (!has_scale_comment(comments))
        throw ParseError("depth PGM missing required '# scale=0.01' comment");

    DepthPanorama pano;
    pano.width = width;
    pano.height = height;
    pano.depth_m.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    std::vector<unsigned char> raw(pano.depth_m.size() * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw ParseError("truncated PGM pixel data in " + path);
    for (std::size_t i = 0; i < pano.depth_m.size(); ++i) {
        const std::uint16_t sample =
            static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
        pano.depth_m[i] = static_cast<double>(sample) * kDepthScale;
    }
    return pano;
}

void write_depth_pgm(const std::string& path, const DepthPanorama& pano) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write depth panorama: " + path);
    out << "P5\n# scale=0.01\n"
        << pano.width << ' ' << pano.height << "\n65535\n";
    std::vector<unsigned char> raw;
    raw.reserve(pano.depth_m.size() * 2);
    for (double d : pano.depth_m) {
        double units = std::round(d / kDepthScale);
        if (units < 0.0) units = 0.0;
        if (units > 65535.0) units = 65535.0;
        const auto sample = static_cast<std::uint16_t>(units);
        raw.push_back(static_cast<unsigned char>(sample >> 8));
        raw.push_back(static_cast<unsigned char>(sample & 0xFF));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
}

} // namespace sliceloc
