// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/flat_ground.hpp"
#include "sliceloc/acontrario.hpp"
#include "sliceloc/eval.hpp"
#include "sliceloc/io.hpp"
#include "sliceloc/null_model.hpp"
#include "sliceloc/projection.hpp"
#include "sliceloc/rng.hpp"
#include "sliceloc/simulator.hpp"

using namespace sliceloc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

SlicePose make_pose(double x, double y, double bearing_deg, int index) {
    SlicePose p;
    p.slice_index = index;
    p.location = ImagePoint{x, y};
    p.scene_bearing = CompassBearing(bearing_deg);
    p.hfov_center_rad = 0.0;
    return p;
}

std::vector<SlicePose> poses_with_errors(ImagePoint camera,
                                         const std::vector<double>& errors,
                                         SubstreamRng& rng) {
    std::vector<SlicePose> poses;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double beta = rng.uniform(0.0, 360.0);
        const double r = rng.uniform(20.0, 250.0);
        const Vec2 v = bearing_to_vector(CompassBearing(beta));
        poses.push_back(make_pose(camera.x + r * v.x, camera.y + r * v.y,
                                  beta + 180.0 + errors[i], static_cast<int>(i)));
    }
    return poses;
}

// ---------------------------------------------------------------------------
// 1. Algorithm-1 optimality against exhaustive subset enumeration.
// ---------------------------------------------------------------------------
void criterion_1() {
    const NullModelParams nm = NullModelParams::corrected_defaults();
    SubstreamRng rng(101, 0, 40);
    const auto start = std::chrono::steady_clock::now();
    int matched = 0;
    const int instances = 200;
    for (int trial = 0; trial < instances; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform_int(5)); // 4..8
        std::vector<double> errors;
        for (int i = 0; i < n; ++i)
            errors.push_back(rng.uniform() < 0.35 ? rng.uniform(60.0, 179.0)
                                                  : rng.uniform(0.0, 40.0));
        const ImagePoint camera{rng.uniform(-200, 200), rng.uniform(-200, 200)};
        const auto poses = poses_with_errors(camera, errors, rng);

        std::vector<double> errs(poses.size());
        for (std::size_t i = 0; i < poses.size(); ++i)
            errs[i] = geometric_error(camera, poses[i]);

        double best_lg = kInf;
        int best_k = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            const int k = __builtin_popcount(mask);
            if (k < 3) continue;
            double alpha = 0.0;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) alpha = std::max(alpha, errs[static_cast<std::size_t>(i)]);
            const double lg = log_epsilon(alpha, n, k, nm);
            if (lg < best_lg || (lg == best_lg && k > best_k)) {
                best_lg = lg;
                best_k = k;
            }
        }

        const SubsetResult got = optimal_subset(poses, camera, nm);
        if (got.lg_eps == best_lg && got.k == best_k) ++matched;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream detail;
    detail << matched << "/" << instances << " exact matches in " << secs << " s";
    report(1, "sorted-prefix subset attains the exhaustive minimum",
           matched == instances && secs < 10.0, detail.str());
}

// ---------------------------------------------------------------------------
// 2. log_epsilon against exact big-integer / extended-precision evaluation.
// ---------------------------------------------------------------------------
void criterion_2() {
    int checked = 0, ok = 0;
    double worst = 0.0;
    for (int n = 3; n <= 20; ++n) {
        for (int k = 3; k <= n; ++k) {
            for (double q : {1e-6, 0.1, 0.5, 1.0}) {
                // Exact integer count, then extended-precision logarithm.
                unsigned __int128 count = static_cast<unsigned __int128>(n - 2);
                count *= binomial(n, k);
                count *= binomial(k, 2);
                const long double expected =
                    std::log10(static_cast<long double>(count)) +
                    static_cast<long double>(k - 2) *
                        std::log10(static_cast<long double>(q));
                const double got = log_epsilon_from_q(q, n, k);
                const double rel =
                    std::abs(got - static_cast<double>(expected)) /
                    std::max(1.0, std::abs(static_cast<double>(expected)));
                worst = std::max(worst, rel);
                ++checked;
                if (rel <= 1e-9) ++ok;
            }
        }
    }
    std::ostringstream detail;
    detail << ok << "/" << checked << " within 1e-9 relative, worst " << worst;
    report(2, "epsilon arithmetic matches exact combinatorics", ok == checked, detail.str());
}

// ---------------------------------------------------------------------------
// 3. OSA-CVL equals brute force over pairs x subsets for n <= 6.
// ---------------------------------------------------------------------------
void criterion_3() {
    const NullModelParams nm = NullModelParams::corrected_defaults();
    ScenarioConfig cfg;
    cfg.n = 6;
    cfg.outlier_fraction = 0.34;
    cfg.bearing_noise_sigma_deg = 2.0;
    cfg.location_noise_sigma_px = 3.0;
    cfg.seed = 303;

    int matched = 0, usable = 0;
    const int instances = 100;
    for (int trial = 0; trial < instances; ++trial) {
        const SyntheticScene scene = generate_scene(cfg, static_cast<std::uint64_t>(trial));
        const auto& poses = scene.poses;
        const int n = static_cast<int>(poses.size());

        double best_lg = kInf;
        int best_k = 0;
        std::set<int> best_subset;
        bool found = false;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const auto pt = ray_intersection(poses[static_cast<std::size_t>(i)],
                                                 poses[static_cast<std::size_t>(j)]);
                if (!pt) continue;
                bool coincident = false;
                for (const SlicePose& p : poses)
                    if (distance(p.location, *pt) <= 1e-9) coincident = true;
                if (coincident) continue;
                std::vector<double> errs(poses.size());
                for (std::size_t m = 0; m < poses.size(); ++m)
                    errs[m] = geometric_error(*pt, poses[m]);
                for (unsigned mask = 0; mask < (1u << n); ++mask) {
                    const int k = __builtin_popcount(mask);
                    if (k < 3) continue;
                    double alpha = 0.0;
                    for (int m = 0; m < n; ++m)
                        if (mask & (1u << m))
                            alpha = std::max(alpha, errs[static_cast<std::size_t>(m)]);
                    const double lg = log_epsilon(alpha, n, k, nm);
                    if (!found || lg < best_lg || (lg == best_lg && k > best_k)) {
                        found = true;
                        best_lg = lg;
                        best_k = k;
                        best_subset.clear();
                        for (int m = 0; m < n; ++m)
                            if (mask & (1u << m)) best_subset.insert(m);
                    }
                }
            }
        }
        if (!found) continue;
        ++usable;

        const RigidityResult res = osa_cvl(poses, 0.0, nm);
        const std::set<int> got(res.inlier_indices.begin(), res.inlier_indices.end());
        if (res.lg_eps == best_lg && got == best_subset) ++matched;
    }
    std::ostringstream detail;
    detail << matched << "/" << usable << " instances identical";
    report(3, "OSA-CVL equals exhaustive pair/subset search (n<=6)",
           usable > 0 && matched == usable, detail.str());
}

// ---------------------------------------------------------------------------
// 4. Outlier robustness at the desk scale.
// ---------------------------------------------------------------------------
void criterion_4() {
    const NullModelParams nm = NullModelParams::corrected_defaults();
    ScenarioConfig cfg;
    cfg.n = 12;
    cfg.seed = 11;
    cfg.outlier_fraction = 1.0 / 3.0; // 4 of 12
    cfg.bearing_noise_sigma_deg = 1.0;
    cfg.location_noise_sigma_px = 3.0;
    cfg.range_min_px = 30.0;
    cfg.range_max_px = 250.0;

    const auto start = std::chrono::steady_clock::now();
    const auto records = run_trials(cfg, 1000, 0.0, nm, 1);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    double recall_sum = 0.0, precision_sum = 0.0;
    std::vector<double> loc_errors;
    for (const TrialRecord& r : records) {
        recall_sum += r.inlier_recall;
        precision_sum += r.inlier_precision;
        if (r.loc_error_m) loc_errors.push_back(*r.loc_error_m);
    }
    const double recall = recall_sum / static_cast<double>(records.size());
    const double precision = precision_sum / static_cast<double>(records.size());
    std::sort(loc_errors.begin(), loc_errors.end());
    const double median_err =
        loc_errors.empty() ? kInf : loc_errors[(loc_errors.size() - 1) / 2];

    // Regression bounds frozen at first measured values (0.9732 / 0.9680)
    // minus two points; both sit above the 0.95 / 0.90 floors.
    const bool pass = recall >= 0.9532 && precision >= 0.9480 && median_err <= 0.5 &&
                      secs < 60.0;
    std::ostringstream detail;
    detail << "recall " << recall << " (>=0.9532), precision " << precision
           << " (>=0.9480), median " << median_err << " m (<=0.5), " << secs << " s";
    report(4, "outlier robustness over 1000 seeded trials", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 5. Null control: false-pass fraction under pure-null scenes.
// ---------------------------------------------------------------------------
void criterion_5() {
    const NullModelParams nm = NullModelParams::corrected_defaults();
    ScenarioConfig cfg;
    cfg.outlier_fraction = 1.0;
    cfg.seed = 500;

    int valid0 = 0, valid1 = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const SyntheticScene scene = generate_scene(cfg, static_cast<std::uint64_t>(t));
        const RigidityResult res = osa_cvl(scene.poses, 0.0, nm);
        if (res.lg_eps < 0.0) ++valid0;
        if (res.lg_eps < -1.0) ++valid1;
    }
    const double frac0 = static_cast<double>(valid0) / trials;
    const double frac1 = static_cast<double>(valid1) / trials;
    const bool pass = frac0 <= 0.20 && valid1 < valid0;
    std::ostringstream detail;
    detail << "valid@tau=0: " << 100.0 * frac0 << "% (<=20%), valid@tau=-1: "
           << 100.0 * frac1 << "% (strictly fewer)";
    report(5, "pure-null false-pass control", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 6. Null model closed form and calibration round trip.
// ---------------------------------------------------------------------------
double inverse_cdf(double w, const NullModelParams& p) {
    const double const_mass = p.C * p.t1 / p.K;
    if (w < const_mass) return w * p.K / p.C;
    const double c0 = p.C * p.t1 - 0.5 * p.A * p.t1 * p.t1 - p.B * p.t1 - w * p.K;
    if (std::abs(p.A) < 1e-15) return -c0 / p.B;
    const double disc = p.B * p.B - 2.0 * p.A * c0;
    const double root1 = (-p.B + std::sqrt(disc)) / p.A;
    if (root1 >= p.t1 - 1e-9 && root1 <= p.t2 + 1e-9) return root1;
    return (-p.B - std::sqrt(disc)) / p.A;
}

// q carries mass K below t2; the remaining population sits beyond t2 where
// the model clips to zero. Sampling in that gauge makes A, B, C recoverable.
double sample_from_q(double u, const NullModelParams& p, SubstreamRng& rng) {
    if (u < p.K) return inverse_cdf(u / p.K, p);
    return rng.uniform(p.t2, 180.0);
}

void criterion_6() {
    const NullModelParams p = NullModelParams::corrected_defaults();
    bool pass = q_cdf(0.0, p) == 0.0;
    pass = pass && q_cdf(132.0, p) == 1.0;
    const double q50 = q_cdf(50.0, p);
    pass = pass && std::abs(q50 - 0.5494) <= 1e-3;

    SubstreamRng rng(606, 0, 41);
    std::vector<double> samples;
    samples.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) samples.push_back(sample_from_q(rng.uniform(), p, rng));
    const NullModelParams fit = calibrate(samples, p.t1, p.t2);
    const double rel_a = std::abs(fit.A - p.A) / std::abs(p.A);
    const double rel_b = std::abs(fit.B - p.B) / p.B;
    const double rel_c = std::abs(fit.C - p.C) / p.C;
    pass = pass && rel_a < 0.05 && rel_b < 0.05 && rel_c < 0.05;

    std::ostringstream detail;
    detail << "Q(0)=" << q_cdf(0.0, p) << ", Q(132)=" << q_cdf(132.0, p)
           << ", Q(50)=" << q50 << ", round-trip rel err A/B/C = " << rel_a << "/"
           << rel_b << "/" << rel_c;
    report(6, "null model constants and calibration round trip", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 7. Geometry exactness: ray intersections and zero-residual refinement.
// ---------------------------------------------------------------------------
void criterion_7() {
    SubstreamRng rng(707, 0, 42);
    int ok = 0;
    const int pairs = 10000;
    for (int i = 0; i < pairs; ++i) {
        const ImagePoint target{rng.uniform(-300, 300), rng.uniform(-300, 300)};
        const double b1 = rng.uniform(0.0, 360.0);
        double b2 = rng.uniform(0.0, 360.0);
        if (circular_diff_deg(b1, b2) < 1.0 || circular_diff_deg(b1, b2) > 179.0)
            b2 = normalize_deg(b2 + 47.0);
        const Vec2 v1 = bearing_to_vector(CompassBearing(b1));
        const Vec2 v2 = bearing_to_vector(CompassBearing(b2));
        const double r1 = rng.uniform(5.0, 400.0), r2 = rng.uniform(5.0, 400.0);
        const SlicePose a = make_pose(target.x - r1 * v1.x, target.y - r1 * v1.y, b1, 0);
        const SlicePose b = make_pose(target.x - r2 * v2.x, target.y - r2 * v2.y, b2, 1);
        const auto pt = ray_intersection(a, b);
        if (pt && distance(*pt, target) < 1e-9 * std::max(1.0, std::hypot(target.x, target.y)))
            ++ok;
    }

    int stars_ok = 0;
    const int stars = 100;
    for (int s = 0; s < stars; ++s) {
        const ImagePoint center{rng.uniform(100, 500), rng.uniform(100, 500)};
        std::vector<SlicePose> poses;
        for (int i = 0; i < 8; ++i) {
            const double bearing = 45.0 * i + rng.uniform(1.0, 40.0) / 8.0;
            const Vec2 v = bearing_to_vector(CompassBearing(bearing));
            const double r = rng.uniform(50.0, 250.0);
            poses.push_back(make_pose(center.x - r * v.x, center.y - r * v.y, bearing, i));
        }
        if (distance(refine_location(poses), center) < 1e-6) ++stars_ok;
    }

    std::ostringstream detail;
    detail << ok << "/" << pairs << " intersections within 1e-9 px, " << stars_ok << "/"
           << stars << " star centers within 1e-6 px";
    report(7, "geometry exactness", ok == pairs && stars_ok == stars, detail.str());
}

// ---------------------------------------------------------------------------
// 8. Projection: flat-ground centroids against dense integration; nadir trip.
// ---------------------------------------------------------------------------
void criterion_8() {
    SlicePlan plan;
    const double height = 2.0;
    const double threshold = 20.0;
    const DepthPanorama pano = testing::make_flat_ground_pano(1024, 512, height, threshold);
    GeoTransform geo;

    double worst = 0.0;
    bool all_present = true;
    for (int slice = 0; slice < plan.n; ++slice) {
        const auto got = scene_centroid(plan, slice, pano, WorldPoint{0, 0, height}, geo);
        const auto oracle = testing::flat_ground_centroid_oracle(plan, slice, height,
                                                                 threshold, geo, 4096);
        if (!got || !oracle) {
            all_present = false;
            break;
        }
        worst = std::max(worst, distance(*got, *oracle));
    }

    const WorldPoint camera{geo.camera_east_m, geo.camera_north_m, height};
    const WorldPoint ground = pixel_to_world(123.0, 512.0, height, camera, 1024, 512);
    const ImagePoint ref = world_to_reference(ground.x, ground.y, geo);
    const double nadir_err = std::hypot(ref.x - geo.ref_width / 2.0, ref.y - geo.ref_height / 2.0);

    const bool pass = all_present && worst <= 0.5 && nadir_err < 1e-9;
    std::ostringstream detail;
    detail << "worst centroid gap " << worst << " px (<=0.5), nadir round trip "
           << nadir_err << " px (<1e-9)";
    report(8, "flat-ground projection oracle", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 9. Metrics: hand confusion arithmetic and threshold buckets.
// ---------------------------------------------------------------------------
void criterion_9() {
    std::vector<EvalRecord> confusion;
    auto add = [&](double lg, bool correct) {
        EvalRecord r;
        r.lg_eps = lg;
        r.reference_correct = correct;
        confusion.push_back(r);
    };
    add(-1, true);
    add(-1, true); // TP x2
    add(-1, false); // FP
    add(1, false);
    add(1, false);
    add(1, false); // TN x3
    add(1, true); // FN
    const auto [counts, rates] =
        confusion_and_rates(confusion, 0.0, NegativeRule::ReferenceIncorrect);
    bool pass = counts.tp == 2 && counts.fp == 1 && counts.tn == 3 && counts.fn == 1;
    pass = pass && rates.potn && std::abs(*rates.potn - 0.75) < 1e-12;
    pass = pass && rates.rotn && std::abs(*rates.rotn - 0.75) < 1e-12;
    pass = pass && rates.f1 && std::abs(*rates.f1 - 0.75) < 1e-12;
    pass = pass && std::abs(rates.acc - 5.0 / 7.0) < 1e-12;

    // Ten records with errors 0.5, 1.5, ..., 9.5 m: hand-computed buckets.
    std::vector<EvalRecord> fixture;
    for (int i = 0; i < 10; ++i) {
        EvalRecord r;
        r.valid = true;
        r.lg_eps = -2.0;
        r.predicted = CameraPose{ImagePoint{0, 0}, CompassBearing(0)};
        r.ground_truth = CameraPose{ImagePoint{0.5 + i, 0}, CompassBearing(i * 1.0)};
        r.meters_per_pixel = 1.0;
        fixture.push_back(r);
    }
    const MetricsReport m = metrics(fixture);
    // errors below 1,3,5,8,10 -> 1,3,5,8,10 of 10 records
    const std::vector<double> expected_loc{10.0, 30.0, 50.0, 80.0, 100.0};
    // orientation errors 0..9 deg below 1,3,5,8,10 -> 1,3,5,8,10
    for (std::size_t i = 0; i < expected_loc.size(); ++i) {
        pass = pass && std::abs(m.loc_below_pct[i] - expected_loc[i]) < 1e-12;
        pass = pass && std::abs(m.ori_below_pct[i] - expected_loc[i]) < 1e-12;
    }
    pass = pass && std::abs(*m.mean_loc_m - 5.0) < 1e-12 &&
           std::abs(*m.median_loc_m - 4.5) < 1e-12;

    report(9, "metrics arithmetic", pass,
           "PoTN=RoTN=F1=0.75, Acc=5/7, buckets 10/30/50/80/100%");
}

// ---------------------------------------------------------------------------
// 10. Determinism across runs and thread counts; single-call latency.
// ---------------------------------------------------------------------------
void criterion_10() {
    const NullModelParams nm = NullModelParams::corrected_defaults();
    ScenarioConfig cfg;
    cfg.seed = 1010;
    cfg.outlier_fraction = 0.25;
    cfg.bearing_noise_sigma_deg = 1.0;
    cfg.location_noise_sigma_px = 2.0;

    const auto serialize = [&](int threads) {
        const auto records = run_trials(cfg, 200, 0.0, nm, threads);
        std::ostringstream out;
        std::vector<ResultRecord> rrs;
        for (const TrialRecord& t : records) rrs.push_back(to_result_record(t));
        write_result_jsonl(out, rrs);
        return out.str();
    };
    const std::string run1 = serialize(1);
    const std::string run1_again = serialize(1);
    const std::string run4 = serialize(4);
    const std::string run8 = serialize(8);
    const bool deterministic = run1 == run1_again && run1 == run4 && run1 == run8;

    // Median latency of a full n = 12 call (66 pairs x subset scan + refine).
    const SyntheticScene scene = generate_scene(cfg, 7);
    std::vector<double> times_ms;
    for (int i = 0; i < 30; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const RigidityResult res = osa_cvl(scene.poses, 0.0, nm);
        const auto t1 = std::chrono::steady_clock::now();
        times_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (res.pairs_tested < 0) std::printf("impossible\n"); // keep the call alive
    }
    std::sort(times_ms.begin(), times_ms.end());
    const double median_ms = times_ms[times_ms.size() / 2];

    const bool pass = deterministic && median_ms < 50.0;
    std::ostringstream detail;
    detail << "byte-identical across 1/4/8 threads: " << (deterministic ? "yes" : "no")
           << ", median osa_cvl latency " << median_ms << " ms (<50)";
    report(10, "determinism and latency", pass, detail.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
