#include "sliceloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "sliceloc/eval.hpp"
#include "sliceloc/rng.hpp"

namespace sliceloc {

namespace {

// Stream tags; one stream per scene keeps the draw order stable.
constexpr std::uint64_t kSceneStream = 1;

} // namespace

void ScenarioConfig::validate() const {
    if (n < 3) throw InvalidConfig("scenario needs n >= 3 slices");
    if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0))
        throw InvalidConfig("outlier_fraction must be in [0, 1]");
    if (!(range_min_px < range_max_px))
        throw InvalidConfig("range_min must be below range_max");
    if (!(range_min_px > 0.0)) throw InvalidConfig("range_min must be > 0");
    if (!(bearing_noise_sigma_deg >= 0.0) || !(location_noise_sigma_px >= 0.0))
        throw InvalidConfig("noise sigmas must be nonnegative");
    if (!(sector_d1_px >= 0.0 && sector_d1_px < sector_d2_px))
        throw InvalidConfig("sector requires 0 <= d1 < d2");
    if (!(sector_half_angle_deg > 0.0 && sector_half_angle_deg <= 180.0))
        throw InvalidConfig("sector half-angle must be in (0, 180]");
    if (!(heading_prior_half_width_deg >= 0.0 && heading_prior_half_width_deg <= 180.0))
        throw InvalidConfig("heading prior half-width must be in [0, 180]");
    if (!(meters_per_pixel > 0.0)) throw InvalidConfig("meters_per_pixel must be > 0");
    if (ref_width_px < 1 || ref_height_px < 1)
        throw InvalidConfig("reference size must be positive");
    if (!(center_jitter_px >= 0.0)) throw InvalidConfig("center jitter must be >= 0");
}

SyntheticScene generate_scene(const ScenarioConfig& cfg) {
    return generate_scene(cfg, 0);
}

SyntheticScene generate_scene(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    SubstreamRng rng(cfg.seed, trial_index, kSceneStream);

    SyntheticScene scene;
    const double cx = static_cast<double>(cfg.ref_width_px) / 2.0 +
                      rng.uniform(-cfg.center_jitter_px, cfg.center_jitter_px);
    const double cy = static_cast<double>(cfg.ref_height_px) / 2.0 +
                      rng.uniform(-cfg.center_jitter_px, cfg.center_jitter_px);
    const double heading_deg = rng.uniform(0.0, 360.0);
    scene.ground_truth = CameraPose{ImagePoint{cx, cy}, CompassBearing(heading_deg)};

    const int n = cfg.n;
    const int n_inliers =
        static_cast<int>(std::lround((1.0 - cfg.outlier_fraction) * n));

    // Seeded shuffle decides which slices are outliers.
    std::vector<int> shuffled(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) shuffled[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
        std::swap(shuffled[static_cast<std::size_t>(i)], shuffled[static_cast<std::size_t>(j)]);
    }
    scene.inlier_mask.assign(static_cast<std::size_t>(n), true);
    for (int i = 0; i < n - n_inliers; ++i)
        scene.inlier_mask[static_cast<std::size_t>(shuffled[static_cast<std::size_t>(i)])] = false;

    scene.poses.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double center_deg = 360.0 * static_cast<double>(i) / static_cast<double>(n);
        const double to_scene_deg = heading_deg + center_deg; // camera -> scene

        SlicePose pose;
        pose.slice_index = i;
        pose.hfov_center_rad = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        if (scene.inlier_mask[static_cast<std::size_t>(i)]) {
            const double r = rng.uniform(cfg.range_min_px, cfg.range_max_px);
            const Vec2 dir = bearing_to_vector(CompassBearing(to_scene_deg));
            pose.location = ImagePoint{cx + r * dir.x + rng.gaussian(cfg.location_noise_sigma_px),
                                       cy + r * dir.y + rng.gaussian(cfg.location_noise_sigma_px)};
            pose.scene_bearing = CompassBearing(to_scene_deg + 180.0 +
                                                rng.gaussian(cfg.bearing_noise_sigma_deg));
        } else {
            // Uniform by area over the sampling annulus around the camera,
            // axis along the slice's prior direction.
            const double ang = to_scene_deg +
                               rng.uniform(-cfg.sector_half_angle_deg, cfg.sector_half_angle_deg);
            const double u = rng.uniform();
            const double rad = std::sqrt(cfg.sector_d1_px * cfg.sector_d1_px +
                                         u * (cfg.sector_d2_px * cfg.sector_d2_px -
                                              cfg.sector_d1_px * cfg.sector_d1_px));
            const Vec2 dir = bearing_to_vector(CompassBearing(ang));
            pose.location = ImagePoint{cx + rad * dir.x, cy + rad * dir.y};
            pose.scene_bearing = CompassBearing(
                to_scene_deg + 180.0 +
                rng.uniform(-cfg.heading_prior_half_width_deg, cfg.heading_prior_half_width_deg));
        }
        scene.poses.push_back(pose);
    }
    return scene;
}

std::vector<double> simulate_null_thetas(const ScenarioConfig& cfg,
                                         std::size_t n_samples) {
    if (n_samples < 1) throw InvalidConfig("need at least one null sample");
    ScenarioConfig null_cfg = cfg;
    null_cfg.outlier_fraction = 1.0;

    std::vector<double> thetas;
    thetas.reserve(n_samples);
    std::uint64_t trial = 0;
    while (thetas.size() < n_samples) {
        const SyntheticScene scene = generate_scene(null_cfg, trial++);
        const auto& poses = scene.poses;
        const int n = static_cast<int>(poses.size());

        bool done = false;
        for (int i = 0; i < n && !done; ++i) {
            for (int j = i + 1; j < n && !done; ++j) {
                const auto pt = ray_intersection(poses[static_cast<std::size_t>(i)],
                                                 poses[static_cast<std::size_t>(j)]);
                if (!pt) continue;
                bool usable = true;
                for (const SlicePose& pose : poses) {
                    if (distance(pose.location, *pt) <= kCoincidentTolPx) {
                        usable = false;
                        break;
                    }
                }
                if (!usable) continue;
                for (int k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    thetas.push_back(geometric_error(*pt, poses[static_cast<std::size_t>(k)]));
                }
                done = true;
            }
        }
    }
    thetas.resize(n_samples);
    return thetas;
}

namespace {

TrialRecord run_one_trial(const ScenarioConfig& cfg, int trial, double tau,
                          const NullModelParams& params) {
    const SyntheticScene scene = generate_scene(cfg, static_cast<std::uint64_t>(trial));
    const ImageBounds bounds{static_cast<double>(cfg.ref_width_px),
                             static_cast<double>(cfg.ref_height_px), 0.10};
    const RigidityResult res = osa_cvl(scene.poses, tau, params, bounds);

    TrialRecord rec;
    char buf[32];
    std::snprintf(buf, sizeof buf, "trial-%06d", trial);
    rec.id = buf;
    rec.valid = res.valid;
    rec.lg_eps = res.lg_eps;
    rec.camera = res.camera;
    rec.camera_gt = scene.ground_truth;
    rec.inliers = res.inlier_indices;
    rec.pairs_tested = res.pairs_tested;
    rec.out_of_bounds = res.out_of_bounds;
    rec.meters_per_pixel = cfg.meters_per_pixel;
    if (res.camera) {
        rec.loc_error_m =
            localization_error_m(*res.camera, scene.ground_truth, cfg.meters_per_pixel);
        rec.heading_error_deg = orientation_error_deg(*res.camera, scene.ground_truth);
    }

    int true_positives = 0;
    int mask_count = 0;
    for (bool inl : scene.inlier_mask) mask_count += inl ? 1 : 0;
    for (int idx : res.inlier_indices)
        if (scene.inlier_mask[static_cast<std::size_t>(idx)]) ++true_positives;
    rec.inlier_precision =
        res.inlier_indices.empty()
            ? 0.0
            : static_cast<double>(true_positives) /
                  static_cast<double>(res.inlier_indices.size());
    rec.inlier_recall = mask_count == 0 ? 0.0
                                        : static_cast<double>(true_positives) /
                                              static_cast<double>(mask_count);
    return rec;
}

} // namespace

std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, int trials, double tau,
                                    const NullModelParams& params, int threads) {
    if (trials < 1) throw InvalidConfig("need at least one trial");
    cfg.validate();
    threads = std::max(1, threads);

    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
    if (threads == 1) {
        for (int t = 0; t < trials; ++t)
            records[static_cast<std::size_t>(t)] = run_one_trial(cfg, t, tau, params);
        return records;
    }

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (int t = w; t < trials; t += threads)
                records[static_cast<std::size_t>(t)] = run_one_trial(cfg, t, tau, params);
        });
    }
    for (std::thread& worker : workers) worker.join();
    return records;
}

} // namespace sliceloc
