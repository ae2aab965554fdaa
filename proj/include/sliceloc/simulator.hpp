/**
 * @file simulator.hpp
 * @brief Synthetic slice-pose scenes (inliers + outliers) for desk-scale
 *        validation and naive-pose generation for null-model calibration.
 */

#ifndef SLICELOC_SIMULATOR_HPP
#define SLICELOC_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sliceloc/acontrario.hpp"
#include "sliceloc/geometry.hpp"
#include "sliceloc/null_model.hpp"

namespace sliceloc {

struct ScenarioConfig {
    int n = 12;
    std::uint64_t seed = 0;
    double outlier_fraction = 0.0;        ///< in [0, 1]
    double bearing_noise_sigma_deg = 0.0;
    double location_noise_sigma_px = 0.0;
    double range_min_px = 30.0;  ///< scene distance from camera
    double range_max_px = 250.0;
    double heading_prior_half_width_deg = 45.0;
    double sector_d1_px = 2.0;   ///< outlier/null sampling annulus
    double sector_d2_px = 300.0;
    double sector_half_angle_deg = 90.0;
    double meters_per_pixel = 0.11;
    int ref_width_px = 640;
    int ref_height_px = 640;
    double center_jitter_px = 160.0; ///< ground-truth camera jitter around center

    void validate() const;
};

struct SyntheticScene {
    CameraPose ground_truth;
    std::vector<SlicePose> poses;
    std::vector<bool> inlier_mask;
};

/// Deterministic scene for the config's seed (trial substream 0).
SyntheticScene generate_scene(const ScenarioConfig& cfg);

/// Deterministic scene for an explicit trial substream.
SyntheticScene generate_scene(const ScenarioConfig& cfg, std::uint64_t trial_index);

/**
 * Angular errors of naive poses under the null hypothesis: pure-outlier
 * scenes, the camera point from the first intersecting pose pair in
 * lexicographic order, and the geometric error of every non-sampled pose.
 * Exactly n_samples values, deterministic for a given seed.
 */
std::vector<double> simulate_null_thetas(const ScenarioConfig& cfg,
                                         std::size_t n_samples);

/// Per-trial outcome of the estimator against the generated ground truth.
struct TrialRecord {
    std::string id;
    bool valid = false;
    double lg_eps = 0.0;
    std::optional<CameraPose> camera;
    std::optional<CameraPose> camera_gt;
    std::vector<int> inliers;
    int pairs_tested = 0;
    bool out_of_bounds = false;
    double meters_per_pixel = 0.0;
    std::optional<double> loc_error_m;      ///< present iff valid
    std::optional<double> heading_error_deg; ///< present iff valid
    double inlier_precision = 0.0; ///< vs the generator's inlier mask
    double inlier_recall = 0.0;
};

/**
 * Run `trials` independent seeded scenes through osa_cvl. Trials use
 * per-trial substreams and may be processed by several worker threads;
 * records come back in trial order and are bit-identical for a fixed seed
 * regardless of `threads`.
 */
std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, int trials, double tau,
                                    const NullModelParams& params, int threads = 1);

} // namespace sliceloc

#endif // SLICELOC_SIMULATOR_HPP
