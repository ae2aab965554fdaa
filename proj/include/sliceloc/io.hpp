/**
 * @file io.hpp
 * @brief File formats: slice-pose / result JSONL, flat key=value configs,
 *        null-model parameter files, and the metrics CSV.
 *
 * lg_eps serializes as the tokens "-inf"/"inf" at the infinities and as a
 * plain number otherwise. Writers emit records in input order and identical
 * bytes for identical inputs.
 */

#ifndef SLICELOC_IO_HPP
#define SLICELOC_IO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sliceloc/eval.hpp"
#include "sliceloc/geometry.hpp"
#include "sliceloc/null_model.hpp"
#include "sliceloc/projection.hpp"
#include "sliceloc/simulator.hpp"

namespace sliceloc {

/// One localization instance: a set of slice poses plus optional ground truth.
struct PoseRecord {
    std::string id;
    double meters_per_pixel = 0.11;
    std::vector<SlicePose> poses;
    std::optional<CameraPose> camera_gt;
    std::optional<bool> reference_correct;
};

/// One estimator outcome; ground truth and passthrough fields are optional.
struct ResultRecord {
    std::string id;
    bool valid = false;
    double lg_eps = 0.0;
    std::optional<CameraPose> camera;
    std::vector<int> inliers;
    int pairs_tested = 0;
    std::optional<CameraPose> camera_gt;
    std::optional<bool> reference_correct;
    std::optional<double> meters_per_pixel;
    std::optional<bool> out_of_bounds;
};

std::vector<PoseRecord> read_pose_jsonl(std::istream& in);
std::vector<PoseRecord> read_pose_jsonl_file(const std::string& path);

void write_result_jsonl(std::ostream& out, const std::vector<ResultRecord>& records);
void write_result_jsonl_file(const std::string& path,
                             const std::vector<ResultRecord>& records);

std::vector<ResultRecord> read_result_jsonl(std::istream& in);
std::vector<ResultRecord> read_result_jsonl_file(const std::string& path);

/// Trial records serialize through the result schema plus diagnostics fields.
ResultRecord to_result_record(const TrialRecord& trial);
void write_trial_jsonl_file(const std::string& path,
                            const std::vector<TrialRecord>& trials);

/// Result records evaluate directly; a default scale fills missing fields.
EvalRecord to_eval_record(const ResultRecord& r, double default_mpp = 0.11);

// Flat key=value text files ('#' comments and blank lines ignored).
std::map<std::string, std::string> read_key_value(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

NullModelParams load_null_model(const std::string& path);
void save_null_model(const std::string& path, const NullModelParams& params);

ScenarioConfig load_scenario_config(const std::string& path);
void save_scenario_config(const std::string& path, const ScenarioConfig& cfg);

SlicePlan load_slice_plan(const std::string& path);
void save_slice_plan(const std::string& path, const SlicePlan& plan);

/// Geotransform plus the panorama camera height (for label generation).
struct GeoConfig {
    GeoTransform transform;
    double camera_height_m = 2.0;
};
GeoConfig load_geo_config(const std::string& path);
void save_geo_config(const std::string& path, const GeoConfig& geo);

/// Metrics CSV: header row plus one row per split label.
void write_metrics_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, MetricsReport>>& rows);
void write_metrics_csv_file(const std::string& path,
                            const std::vector<std::pair<std::string, MetricsReport>>& rows);

} // namespace sliceloc

#endif // SLICELOC_IO_HPP
