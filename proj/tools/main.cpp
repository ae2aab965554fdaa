/**
 * Command-line front end: localization, simulation, null-model calibration,
 * evaluation, and depth-panorama label generation.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sliceloc/acontrario.hpp"
#include "sliceloc/io.hpp"
#include "sliceloc/null_model.hpp"
#include "sliceloc/projection.hpp"
#include "sliceloc/simulator.hpp"

namespace {

using namespace sliceloc;

NullModelParams load_model_or_default(const std::string& path) {
    if (path.empty()) return NullModelParams::corrected_defaults();
    return load_null_model(path);
}

int cmd_localize(const std::string& poses_path, const std::string& model_path,
                 double tau, const std::string& out_path, double ref_width,
                 double ref_height) {
    const NullModelParams model = load_model_or_default(model_path);
    const std::vector<PoseRecord> inputs = read_pose_jsonl_file(poses_path);
    const ImageBounds bounds{ref_width, ref_height, 0.10};

    std::vector<ResultRecord> results;
    results.reserve(inputs.size());
    for (const PoseRecord& input : inputs) {
        const RigidityResult res = osa_cvl(input.poses, tau, model, bounds);
        ResultRecord out;
        out.id = input.id;
        out.valid = res.valid;
        out.lg_eps = res.lg_eps;
        out.camera = res.camera;
        out.inliers = res.inlier_indices;
        out.pairs_tested = res.pairs_tested;
        out.camera_gt = input.camera_gt;
        out.reference_correct = input.reference_correct;
        out.meters_per_pixel = input.meters_per_pixel;
        out.out_of_bounds = res.out_of_bounds;
        results.push_back(std::move(out));
    }
    write_result_jsonl_file(out_path, results);
    std::cout << "localized " << results.size() << " record(s) -> " << out_path << '\n';
    return 0;
}

int cmd_simulate(const std::string& cfg_path, int trials, double tau,
                 const std::string& model_path, int threads,
                 const std::string& out_path) {
    const ScenarioConfig cfg = cfg_path.empty() ? ScenarioConfig{} : load_scenario_config(cfg_path);
    const NullModelParams model = load_model_or_default(model_path);
    const std::vector<TrialRecord> records = run_trials(cfg, trials, tau, model, threads);
    write_trial_jsonl_file(out_path, records);
    std::cout << "simulated " << records.size() << " trial(s) -> " << out_path << '\n';
    return 0;
}

int cmd_calibrate_null(const std::string& cfg_path, std::size_t samples, double t1,
                       double t2, const std::string& out_path) {
    ScenarioConfig cfg = cfg_path.empty() ? ScenarioConfig{} : load_scenario_config(cfg_path);
    cfg.outlier_fraction = 1.0;
    const std::vector<double> thetas = simulate_null_thetas(cfg, samples);
    const NullModelParams fitted = calibrate(thetas, t1, t2);
    save_null_model(out_path, fitted);
    std::cout << "calibrated null model from " << samples << " sample(s): K=" << fitted.K
              << " -> " << out_path << '\n';
    return 0;
}

int cmd_evaluate(const std::string& records_path, const std::string& mode, double tau,
                 double default_mpp, bool include_invalid, const std::string& out_path) {
    const std::vector<ResultRecord> results = read_result_jsonl_file(records_path);
    if (results.empty()) throw EmptyInput("no records in " + records_path);
    std::vector<EvalRecord> records;
    records.reserve(results.size());
    for (const ResultRecord& r : results) records.push_back(to_eval_record(r, default_mpp));

    const NegativeRule rule = mode == "reference" ? NegativeRule::ReferenceIncorrect
                                                  : NegativeRule::LocalizationErrorOver10m;
    const MetricsReport report = metrics(records, tau, rule, include_invalid);
    write_metrics_csv_file(out_path, {{"all", report}});
    std::cout << "evaluated " << records.size() << " record(s) -> " << out_path << '\n';
    return 0;
}

int cmd_project(const std::string& pano_path, const std::string& plan_path,
                const std::string& geo_path, const std::string& out_path) {
    const DepthPanorama pano = read_depth_pgm(pano_path);
    const SlicePlan plan = plan_path.empty() ? SlicePlan{} : load_slice_plan(plan_path);
    const GeoConfig geo = geo_path.empty() ? GeoConfig{} : load_geo_config(geo_path);
    const WorldPoint camera{geo.transform.camera_east_m, geo.transform.camera_north_m,
                            geo.camera_height_m};

    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write " + out_path);
    out.precision(12);
    out << "slice_index,hfov_center_deg,valid,x_px,y_px\n";
    for (int i = 0; i < plan.n; ++i) {
        const auto centroid = scene_centroid(plan, i, pano, camera, geo.transform);
        out << i << ',' << plan.hfov_center_rad(i) * kRadToDeg << ','
            << (centroid ? 1 : 0) << ',';
        if (centroid)
            out << centroid->x << ',' << centroid->y << '\n';
        else
            out << ",\n";
    }
    std::cout << "projected " << plan.n << " slice(s) -> " << out_path << '\n';
    return 0;
}

int cmd_slice_plan(int n, double hfov_deg, double vfov_deg, double vfov_center_deg,
                   int slice_px, const std::string& out_path) {
    SlicePlan plan;
    plan.n = n;
    plan.hfov_deg = hfov_deg;
    plan.vfov_deg = vfov_deg;
    plan.vfov_center_rad = vfov_center_deg * kDegToRad;
    plan.slice_px = slice_px;
    plan.validate();
    save_slice_plan(out_path, plan);
    std::cout << "wrote slice plan (n=" << n << ") -> " << out_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slice-based cross-view localization with a-contrario validation"};
    app.require_subcommand(1);

    // localize
    std::string poses_path, model_path, out_path;
    double tau = 0.0, ref_width = 640.0, ref_height = 640.0;
    auto* localize = app.add_subcommand("localize", "Run OSA-CVL on slice-pose records");
    localize->add_option("--poses", poses_path, "Slice-pose JSONL input")->required();
    localize->add_option("--null-model", model_path, "Null-model parameter file");
    localize->add_option("--tau", tau, "Meaningfulness threshold (log10)");
    localize->add_option("--ref-width", ref_width, "Reference image width (px)");
    localize->add_option("--ref-height", ref_height, "Reference image height (px)");
    localize->add_option("--out", out_path, "Result JSONL output")->required();

    // simulate
    std::string sim_cfg, sim_model, sim_out;
    int trials = 100, threads = 1;
    double sim_tau = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Run seeded synthetic trials");
    simulate->add_option("--config", sim_cfg, "Scenario config (key=value)");
    simulate->add_option("--trials", trials, "Number of trials")->required();
    simulate->add_option("--tau", sim_tau, "Meaningfulness threshold (log10)");
    simulate->add_option("--null-model", sim_model, "Null-model parameter file");
    simulate->add_option("--threads", threads, "Worker threads");
    simulate->add_option("--out", sim_out, "Trial-record JSONL output")->required();

    // calibrate-null
    std::string cal_cfg, cal_out;
    std::size_t samples = 260000;
    double t1 = 50.0, t2 = 132.0;
    auto* cal = app.add_subcommand("calibrate-null",
                                   "Fit the null model from simulated naive poses");
    cal->add_option("--config", cal_cfg, "Scenario config (key=value)");
    cal->add_option("--samples", samples, "Number of angular-error samples");
    cal->add_option("--t1", t1, "Constant/linear breakpoint (deg)");
    cal->add_option("--t2", t2, "Linear/zero breakpoint (deg)");
    cal->add_option("--out", cal_out, "Null-model output file")->required();

    // evaluate
    std::string eval_records, eval_mode = "localization", eval_out;
    double eval_tau = 0.0, eval_mpp = 0.11;
    bool include_invalid = false;
    auto* evaluate = app.add_subcommand("evaluate", "Compute metrics over result records");
    evaluate->add_option("--records", eval_records, "Result JSONL input")->required();
    evaluate->add_option("--mode", eval_mode, "localization | reference")
        ->check(CLI::IsMember({"localization", "reference"}));
    evaluate->add_option("--tau", eval_tau, "Decision threshold (log10)");
    evaluate->add_option("--mpp", eval_mpp, "Fallback meters-per-pixel");
    evaluate->add_flag("--include-invalid", include_invalid,
                       "Use all records as the threshold-bucket denominator");
    evaluate->add_option("--out", eval_out, "Metrics CSV output")->required();

    // project
    std::string pano_path, plan_path, geo_path, proj_out;
    auto* project = app.add_subcommand("project",
                                       "Per-slice scene centroids from a depth panorama");
    project->add_option("--pano", pano_path, "Depth panorama (16-bit PGM)")->required();
    project->add_option("--plan", plan_path, "Slice plan (key=value)");
    project->add_option("--geo", geo_path, "Geotransform config (key=value)");
    project->add_option("--out", proj_out, "Centroid CSV output")->required();

    // slice-plan
    int plan_n = 12, plan_px = 512;
    double plan_hfov = 90.0, plan_vfov = 90.0, plan_center = 135.0;
    std::string plan_out;
    auto* splan = app.add_subcommand("slice-plan", "Write a slice plan file");
    splan->add_option("--n", plan_n, "Number of slices");
    splan->add_option("--hfov", plan_hfov, "Slice HFoV (deg)");
    splan->add_option("--vfov", plan_vfov, "Slice VFoV (deg)");
    splan->add_option("--vfov-center", plan_center, "VFoV center zenith angle (deg)");
    splan->add_option("--slice-px", plan_px, "Slice pixel size");
    splan->add_option("--out", plan_out, "Plan output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (localize->parsed())
            return cmd_localize(poses_path, model_path, tau, out_path, ref_width, ref_height);
        if (simulate->parsed())
            return cmd_simulate(sim_cfg, trials, sim_tau, sim_model, threads, sim_out);
        if (cal->parsed()) return cmd_calibrate_null(cal_cfg, samples, t1, t2, cal_out);
        if (evaluate->parsed())
            return cmd_evaluate(eval_records, eval_mode, eval_tau, eval_mpp,
                                include_invalid, eval_out);
        if (project->parsed()) return cmd_project(pano_path, plan_path, geo_path, proj_out);
        if (splan->parsed())
            return cmd_slice_plan(plan_n, plan_hfov, plan_vfov, plan_center, plan_px, plan_out);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
