// Python bindings for the localization core. Exposes the geometry primitives,
// the null model, the OSA-CVL estimator, the simulator, and the metrics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "sliceloc/acontrario.hpp"
#include "sliceloc/eval.hpp"
#include "sliceloc/geometry.hpp"
#include "sliceloc/null_model.hpp"
#include "sliceloc/projection.hpp"
#include "sliceloc/simulator.hpp"

namespace py = pybind11;
using namespace sliceloc;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Slice-based cross-view localization with a-contrario validation";

    py::register_exception<DegenerateGeometry>(m, "DegenerateGeometryError");
    py::register_exception<InvalidConfig>(m, "InvalidConfigError");
    py::register_exception<UndefinedMean>(m, "UndefinedMeanError");
    py::register_exception<InvalidArity>(m, "InvalidArityError");
    py::register_exception<InsufficientSamples>(m, "InsufficientSamplesError");
    py::register_exception<DegenerateFit>(m, "DegenerateFitError");
    py::register_exception<OutOfRange>(m, "OutOfRangeError");
    py::register_exception<EmptyInput>(m, "EmptyInputError");

    py::class_<ImagePoint>(m, "ImagePoint")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return ImagePoint{x, y}; }),
             py::arg("x"), py::arg("y"))
        .def_readwrite("x", &ImagePoint::x)
        .def_readwrite("y", &ImagePoint::y)
        .def("__repr__", [](const ImagePoint& p) {
            return "ImagePoint(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::class_<CompassBearing>(m, "CompassBearing")
        .def(py::init<double>(), py::arg("degrees"))
        .def_property_readonly("degrees", &CompassBearing::degrees)
        .def("rotated", &CompassBearing::rotated, py::arg("delta_deg"))
        .def("__repr__", [](const CompassBearing& b) {
            return "CompassBearing(" + std::to_string(b.degrees()) + ")";
        });

    py::class_<SlicePose>(m, "SlicePose")
        .def(py::init([](int slice_index, double x, double y, double bearing_deg,
                         double hfov_center_rad) {
                 SlicePose p;
                 p.slice_index = slice_index;
                 p.location = ImagePoint{x, y};
                 p.scene_bearing = CompassBearing(bearing_deg);
                 p.hfov_center_rad = hfov_center_rad;
                 return p;
             }),
             py::arg("slice_index"), py::arg("x"), py::arg("y"), py::arg("bearing_deg"),
             py::arg("hfov_center_rad") = 0.0)
        .def_readwrite("slice_index", &SlicePose::slice_index)
        .def_readwrite("location", &SlicePose::location)
        .def_readwrite("scene_bearing", &SlicePose::scene_bearing)
        .def_readwrite("hfov_center_rad", &SlicePose::hfov_center_rad);

    py::class_<CameraPose>(m, "CameraPose")
        .def(py::init([](double x, double y, double heading_deg) {
                 return CameraPose{ImagePoint{x, y}, CompassBearing(heading_deg)};
             }),
             py::arg("x"), py::arg("y"), py::arg("heading_deg"))
        .def_readwrite("location", &CameraPose::location)
        .def_readwrite("heading", &CameraPose::heading);

    py::class_<AnnularSector>(m, "AnnularSector")
        .def(py::init([](ImagePoint origin, double d1, double d2, double axis_deg,
                         double half_angle_deg) {
                 AnnularSector s;
                 s.origin = origin;
                 s.inner_radius = d1;
                 s.outer_radius = d2;
                 s.axis = CompassBearing(axis_deg);
                 s.half_angle_deg = half_angle_deg;
                 s.validate();
                 return s;
             }),
             py::arg("origin"), py::arg("inner_radius"), py::arg("outer_radius"),
             py::arg("axis_deg"), py::arg("half_angle_deg"))
        .def_readwrite("origin", &AnnularSector::origin)
        .def_readwrite("inner_radius", &AnnularSector::inner_radius)
        .def_readwrite("outer_radius", &AnnularSector::outer_radius)
        .def_readwrite("axis", &AnnularSector::axis)
        .def_readwrite("half_angle_deg", &AnnularSector::half_angle_deg);

    py::enum_<ErrorMode>(m, "ErrorMode")
        .value("PerSliceBearing", ErrorMode::PerSliceBearing)
        .value("GlobalHeading", ErrorMode::GlobalHeading);

    m.def("bearing_to_vector",
          [](const CompassBearing& b) {
              const Vec2 v = bearing_to_vector(b);
              return std::make_pair(v.x, v.y);
          },
          py::arg("bearing"));
    m.def("vector_to_bearing",
          [](double x, double y) { return vector_to_bearing(Vec2{x, y}); }, py::arg("x"),
          py::arg("y"));
    m.def("geometric_error", &geometric_error, py::arg("camera_location"), py::arg("pose"),
          py::arg("mode") = ErrorMode::PerSliceBearing,
          py::arg("heading") = std::nullopt);
    m.def("ray_intersection", &ray_intersection, py::arg("a"), py::arg("b"));
    m.def("refine_location",
          [](const std::vector<SlicePose>& poses, std::optional<ImagePoint> init) {
              return refine_location(poses, init);
          },
          py::arg("poses"), py::arg("init") = std::nullopt);
    m.def("camera_heading",
          [](const std::vector<SlicePose>& poses) { return camera_heading(poses); },
          py::arg("poses"));
    m.def("search_region", &search_region, py::arg("prior_center"),
          py::arg("hfov_center_rad"), py::arg("heading_prior"),
          py::arg("prior_half_width_deg"), py::arg("camera_height_m"), py::arg("vfov_deg"),
          py::arg("vfov_center_zenith_deg"), py::arg("meters_per_pixel"),
          py::arg("max_radius_px"), py::arg("hfov_deg") = 90.0);
    m.def("point_in_sector", &point_in_sector, py::arg("point"), py::arg("sector"));

    py::class_<NullModelParams>(m, "NullModelParams")
        .def(py::init<>())
        .def_static("corrected_defaults", &NullModelParams::corrected_defaults)
        .def_static("printed_defaults", &NullModelParams::printed_defaults)
        .def_static("from_linear", &NullModelParams::from_linear, py::arg("t1"),
                    py::arg("t2"), py::arg("A"), py::arg("B"))
        .def_readwrite("t1", &NullModelParams::t1)
        .def_readwrite("t2", &NullModelParams::t2)
        .def_readwrite("A", &NullModelParams::A)
        .def_readwrite("B", &NullModelParams::B)
        .def_readwrite("C", &NullModelParams::C)
        .def_readwrite("K", &NullModelParams::K)
        .def("is_valid", &NullModelParams::is_valid);

    m.def("q_density", &q_density, py::arg("theta_deg"), py::arg("params"));
    m.def("q_cdf", &q_cdf, py::arg("theta_deg"), py::arg("params"));
    m.def("calibrate",
          [](const std::vector<double>& thetas, double t1, double t2) {
              return calibrate(thetas, t1, t2);
          },
          py::arg("theta_samples_deg"), py::arg("t1"), py::arg("t2"));

    py::class_<ImageBounds>(m, "ImageBounds")
        .def(py::init([](double width, double height, double margin_frac) {
                 return ImageBounds{width, height, margin_frac};
             }),
             py::arg("width") = 640.0, py::arg("height") = 640.0,
             py::arg("margin_frac") = 0.10)
        .def_readwrite("width", &ImageBounds::width)
        .def_readwrite("height", &ImageBounds::height)
        .def_readwrite("margin_frac", &ImageBounds::margin_frac);

    py::class_<RigidityResult>(m, "RigidityResult")
        .def_readonly("inlier_indices", &RigidityResult::inlier_indices)
        .def_readonly("alpha_deg", &RigidityResult::alpha_deg)
        .def_readonly("lg_eps", &RigidityResult::lg_eps)
        .def_readonly("camera", &RigidityResult::camera)
        .def_readonly("valid", &RigidityResult::valid)
        .def_readonly("pairs_tested", &RigidityResult::pairs_tested)
        .def_readonly("out_of_bounds", &RigidityResult::out_of_bounds);

    py::class_<SubsetResult>(m, "SubsetResult")
        .def_readonly("indices", &SubsetResult::indices)
        .def_readonly("lg_eps", &SubsetResult::lg_eps)
        .def_readonly("alpha_deg", &SubsetResult::alpha_deg)
        .def_readonly("k", &SubsetResult::k);

    m.def("rigidity_alpha",
          [](const std::vector<SlicePose>& poses, const std::vector<int>& subset,
             ImagePoint camera) { return rigidity_alpha(poses, subset, camera); },
          py::arg("poses"), py::arg("subset"), py::arg("camera_location"));
    m.def("log_epsilon", &log_epsilon, py::arg("alpha_deg"), py::arg("n"), py::arg("k"),
          py::arg("params"));
    m.def("log_epsilon_from_q", &log_epsilon_from_q, py::arg("q"), py::arg("n"),
          py::arg("k"));
    m.def("optimal_subset",
          [](const std::vector<SlicePose>& poses, ImagePoint camera,
             const NullModelParams& p) { return optimal_subset(poses, camera, p); },
          py::arg("poses"), py::arg("camera_location"), py::arg("params"));
    m.def("osa_cvl",
          [](const std::vector<SlicePose>& poses, double tau, const NullModelParams& p,
             std::optional<ImageBounds> bounds) { return osa_cvl(poses, tau, p, bounds); },
          py::arg("poses"), py::arg("tau"), py::arg("params"),
          py::arg("bounds") = std::nullopt);
    m.def("nfa_upper_bound_check",
          [](const std::vector<SlicePose>& poses, ImagePoint camera,
             const std::vector<int>& subset, const NullModelParams& p) {
              return nfa_upper_bound_check(poses, camera, subset, p);
          },
          py::arg("poses"), py::arg("camera_location"), py::arg("subset"), py::arg("params"));

    py::class_<DepthPanorama>(m, "DepthPanorama")
        .def(py::init([](int width, int height, std::vector<double> depth,
                         double invalid_threshold) {
                 if (depth.size() != static_cast<std::size_t>(width) * height)
                     throw InvalidConfig("depth buffer size must be width*height");
                 DepthPanorama p;
                 p.width = width;
                 p.height = height;
                 p.depth_m = std::move(depth);
                 p.invalid_threshold = invalid_threshold;
                 return p;
             }),
             py::arg("width"), py::arg("height"), py::arg("depth_m"),
             py::arg("invalid_threshold") = 255.0)
        .def_readonly("width", &DepthPanorama::width)
        .def_readonly("height", &DepthPanorama::height)
        .def_readwrite("invalid_threshold", &DepthPanorama::invalid_threshold)
        .def("at", &DepthPanorama::at, py::arg("x"), py::arg("y"));

    py::class_<GeoTransform>(m, "GeoTransform")
        .def(py::init<>())
        .def_readwrite("ref_width", &GeoTransform::ref_width)
        .def_readwrite("ref_height", &GeoTransform::ref_height)
        .def_readwrite("meters_per_pixel", &GeoTransform::meters_per_pixel)
        .def_readwrite("camera_east_m", &GeoTransform::camera_east_m)
        .def_readwrite("camera_north_m", &GeoTransform::camera_north_m);

    py::class_<SlicePlan>(m, "SlicePlan")
        .def(py::init<>())
        .def_readwrite("n", &SlicePlan::n)
        .def_readwrite("hfov_deg", &SlicePlan::hfov_deg)
        .def_readwrite("vfov_deg", &SlicePlan::vfov_deg)
        .def_readwrite("vfov_center_rad", &SlicePlan::vfov_center_rad)
        .def_readwrite("slice_px", &SlicePlan::slice_px)
        .def("hfov_center_rad", &SlicePlan::hfov_center_rad, py::arg("slice_index"));

    py::class_<WorldPoint>(m, "WorldPoint")
        .def(py::init([](double x, double y, double z) { return WorldPoint{x, y, z}; }),
             py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &WorldPoint::x)
        .def_readwrite("y", &WorldPoint::y)
        .def_readwrite("z", &WorldPoint::z);

    m.def("panoramic_angles", &panoramic_angles, py::arg("x"), py::arg("y"),
          py::arg("width"), py::arg("height"));
    m.def("pixel_to_world", &pixel_to_world, py::arg("x"), py::arg("y"), py::arg("depth_m"),
          py::arg("camera"), py::arg("width"), py::arg("height"));
    m.def("world_to_reference", &world_to_reference, py::arg("x_m"), py::arg("y_m"),
          py::arg("geo"));
    m.def("scene_centroid", &scene_centroid, py::arg("plan"), py::arg("slice_index"),
          py::arg("pano"), py::arg("camera_world"), py::arg("geo"));
    m.def("pinhole_to_pano", &pinhole_to_pano, py::arg("plan"), py::arg("slice_index"),
          py::arg("u"), py::arg("v"), py::arg("pano_width"), py::arg("pano_height"));
    m.def("read_depth_pgm", &read_depth_pgm, py::arg("path"));
    m.def("write_depth_pgm", &write_depth_pgm, py::arg("path"), py::arg("pano"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("n", &ScenarioConfig::n)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("outlier_fraction", &ScenarioConfig::outlier_fraction)
        .def_readwrite("bearing_noise_sigma_deg", &ScenarioConfig::bearing_noise_sigma_deg)
        .def_readwrite("location_noise_sigma_px", &ScenarioConfig::location_noise_sigma_px)
        .def_readwrite("range_min_px", &ScenarioConfig::range_min_px)
        .def_readwrite("range_max_px", &ScenarioConfig::range_max_px)
        .def_readwrite("heading_prior_half_width_deg",
                       &ScenarioConfig::heading_prior_half_width_deg)
        .def_readwrite("sector_d1_px", &ScenarioConfig::sector_d1_px)
        .def_readwrite("sector_d2_px", &ScenarioConfig::sector_d2_px)
        .def_readwrite("sector_half_angle_deg", &ScenarioConfig::sector_half_angle_deg)
        .def_readwrite("meters_per_pixel", &ScenarioConfig::meters_per_pixel)
        .def_readwrite("ref_width_px", &ScenarioConfig::ref_width_px)
        .def_readwrite("ref_height_px", &ScenarioConfig::ref_height_px)
        .def_readwrite("center_jitter_px", &ScenarioConfig::center_jitter_px);

    py::class_<SyntheticScene>(m, "SyntheticScene")
        .def_readonly("ground_truth", &SyntheticScene::ground_truth)
        .def_readonly("poses", &SyntheticScene::poses)
        .def_readonly("inlier_mask", &SyntheticScene::inlier_mask);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("id", &TrialRecord::id)
        .def_readonly("valid", &TrialRecord::valid)
        .def_readonly("lg_eps", &TrialRecord::lg_eps)
        .def_readonly("camera", &TrialRecord::camera)
        .def_readonly("camera_gt", &TrialRecord::camera_gt)
        .def_readonly("inliers", &TrialRecord::inliers)
        .def_readonly("pairs_tested", &TrialRecord::pairs_tested)
        .def_readonly("loc_error_m", &TrialRecord::loc_error_m)
        .def_readonly("heading_error_deg", &TrialRecord::heading_error_deg)
        .def_readonly("inlier_precision", &TrialRecord::inlier_precision)
        .def_readonly("inlier_recall", &TrialRecord::inlier_recall);

    m.def("generate_scene",
          [](const ScenarioConfig& cfg, std::uint64_t trial) {
              return generate_scene(cfg, trial);
          },
          py::arg("config"), py::arg("trial_index") = 0);
    m.def("simulate_null_thetas", &simulate_null_thetas, py::arg("config"),
          py::arg("n_samples"));
    m.def("run_trials", &run_trials, py::arg("config"), py::arg("trials"), py::arg("tau"),
          py::arg("params"), py::arg("threads") = 1);

    py::enum_<NegativeRule>(m, "NegativeRule")
        .value("LocalizationErrorOver10m", NegativeRule::LocalizationErrorOver10m)
        .value("ReferenceIncorrect", NegativeRule::ReferenceIncorrect);

    py::class_<EvalRecord>(m, "EvalRecord")
        .def(py::init<>())
        .def_readwrite("id", &EvalRecord::id)
        .def_readwrite("predicted", &EvalRecord::predicted)
        .def_readwrite("valid", &EvalRecord::valid)
        .def_readwrite("lg_eps", &EvalRecord::lg_eps)
        .def_readwrite("ground_truth", &EvalRecord::ground_truth)
        .def_readwrite("reference_correct", &EvalRecord::reference_correct)
        .def_readwrite("meters_per_pixel", &EvalRecord::meters_per_pixel);

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def_readonly("tp", &ConfusionCounts::tp)
        .def_readonly("fp", &ConfusionCounts::fp)
        .def_readonly("tn", &ConfusionCounts::tn)
        .def_readonly("fn", &ConfusionCounts::fn)
        .def("total", &ConfusionCounts::total);

    py::class_<NegativeRates>(m, "NegativeRates")
        .def_readonly("potn", &NegativeRates::potn)
        .def_readonly("rotn", &NegativeRates::rotn)
        .def_readonly("f1", &NegativeRates::f1)
        .def_readonly("acc", &NegativeRates::acc);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("total_records", &MetricsReport::total_records)
        .def_readonly("valid_records", &MetricsReport::valid_records)
        .def_readonly("pos_pct", &MetricsReport::pos_pct)
        .def_readonly("mean_loc_m", &MetricsReport::mean_loc_m)
        .def_readonly("median_loc_m", &MetricsReport::median_loc_m)
        .def_readonly("mean_ori_deg", &MetricsReport::mean_ori_deg)
        .def_readonly("median_ori_deg", &MetricsReport::median_ori_deg)
        .def_readonly("loc_thresholds_m", &MetricsReport::loc_thresholds_m)
        .def_readonly("loc_below_pct", &MetricsReport::loc_below_pct)
        .def_readonly("ori_thresholds_deg", &MetricsReport::ori_thresholds_deg)
        .def_readonly("ori_below_pct", &MetricsReport::ori_below_pct)
        .def_readonly("confusion", &MetricsReport::confusion)
        .def_readonly("rates", &MetricsReport::rates);

    m.def("localization_error_m", &localization_error_m, py::arg("predicted"),
          py::arg("truth"), py::arg("meters_per_pixel"));
    m.def("orientation_error_deg", &orientation_error_deg, py::arg("predicted"),
          py::arg("truth"));
    m.def("confusion_and_rates",
          [](const std::vector<EvalRecord>& records, double tau, NegativeRule rule) {
              return confusion_and_rates(records, tau, rule);
          },
          py::arg("records"), py::arg("tau"), py::arg("rule"));
    m.def("metrics",
          [](const std::vector<EvalRecord>& records, double tau, NegativeRule rule,
             bool include_invalid) {
              return metrics(records, tau, rule, include_invalid);
          },
          py::arg("records"), py::arg("tau") = 0.0,
          py::arg("rule") = NegativeRule::LocalizationErrorOver10m,
          py::arg("include_invalid") = false);
}
