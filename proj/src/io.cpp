#include "sliceloc/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sliceloc {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json lg_eps_to_json(double lg) {
    if (lg == kInf) return "inf";
    if (lg == -kInf) return "-inf";
    return lg;
}

double lg_eps_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ParseError("unrecognized lg_eps token: " + s);
    }
    return j.get<double>();
}

json pose_to_json(const CameraPose& p) {
    return json{{"x", p.location.x},
                {"y", p.location.y},
                {"heading_deg", p.heading.degrees()}};
}

CameraPose pose_from_json(const json& j) {
    return CameraPose{ImagePoint{j.at("x").get<double>(), j.at("y").get<double>()},
                      CompassBearing(j.at("heading_deg").get<double>())};
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

std::ofstream create_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    return out;
}

double require_double(const std::map<std::string, std::string>& kv,
                      const std::string& key, const std::string& path) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(path + ": missing key '" + key + "'");
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ParseError(path + ": bad value for '" + key + "'");
    }
}

std::optional<double> optional_double(const std::map<std::string, std::string>& kv,
                                      const std::string& key, const std::string& path) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ParseError(path + ": bad value for '" + key + "'");
    }
}

} // namespace

std::vector<PoseRecord> read_pose_jsonl(std::istream& in) {
    std::vector<PoseRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("pose JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            PoseRecord rec;
            rec.id = j.at("id").get<std::string>();
            rec.meters_per_pixel = j.value("meters_per_pixel", 0.11);
            const int n = j.at("n").get<int>();
            for (const json& pj : j.at("poses")) {
                SlicePose pose;
                pose.slice_index = pj.at("slice_index").get<int>();
                pose.location = ImagePoint{pj.at("x").get<double>(), pj.at("y").get<double>()};
                pose.scene_bearing = CompassBearing(pj.at("bearing_deg").get<double>());
                pose.hfov_center_rad = pj.at("hfov_center_deg").get<double>() * kDegToRad;
                rec.poses.push_back(pose);
            }
            if (static_cast<int>(rec.poses.size()) != n)
                throw ParseError("pose count disagrees with field 'n'");
            if (j.contains("camera_gt") && !j["camera_gt"].is_null())
                rec.camera_gt = pose_from_json(j["camera_gt"]);
            if (j.contains("reference_correct") && !j["reference_correct"].is_null())
                rec.reference_correct = j["reference_correct"].get<bool>();
            records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw ParseError("pose JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::vector<PoseRecord> read_pose_jsonl_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_pose_jsonl(in);
}

namespace {

json result_to_json(const ResultRecord& r) {
    json j{{"id", r.id},
           {"valid", r.valid},
           {"lg_eps", lg_eps_to_json(r.lg_eps)},
           {"camera", r.camera ? pose_to_json(*r.camera) : json(nullptr)},
           {"inliers", r.inliers},
           {"pairs_tested", r.pairs_tested}};
    if (r.camera_gt) j["camera_gt"] = pose_to_json(*r.camera_gt);
    if (r.reference_correct) j["reference_correct"] = *r.reference_correct;
    if (r.meters_per_pixel) j["meters_per_pixel"] = *r.meters_per_pixel;
    if (r.out_of_bounds) j["out_of_bounds"] = *r.out_of_bounds;
    return j;
}

ResultRecord result_from_json(const json& j) {
    ResultRecord r;
    r.id = j.at("id").get<std::string>();
    r.valid = j.at("valid").get<bool>();
    r.lg_eps = lg_eps_from_json(j.at("lg_eps"));
    if (j.contains("camera") && !j["camera"].is_null())
        r.camera = pose_from_json(j["camera"]);
    if (j.contains("inliers")) r.inliers = j["inliers"].get<std::vector<int>>();
    r.pairs_tested = j.value("pairs_tested", 0);
    if (j.contains("camera_gt") && !j["camera_gt"].is_null())
        r.camera_gt = pose_from_json(j["camera_gt"]);
    if (j.contains("reference_correct") && !j["reference_correct"].is_null())
        r.reference_correct = j["reference_correct"].get<bool>();
    if (j.contains("meters_per_pixel"))
        r.meters_per_pixel = j["meters_per_pixel"].get<double>();
    if (j.contains("out_of_bounds")) r.out_of_bounds = j["out_of_bounds"].get<bool>();
    return r;
}

} // namespace

void write_result_jsonl(std::ostream& out, const std::vector<ResultRecord>& records) {
    for (const ResultRecord& r : records) out << result_to_json(r).dump() << '\n';
}

void write_result_jsonl_file(const std::string& path,
                             const std::vector<ResultRecord>& records) {
    auto out = create_or_throw(path);
    write_result_jsonl(out, records);
}

std::vector<ResultRecord> read_result_jsonl(std::istream& in) {
    std::vector<ResultRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(result_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError("result JSONL line " + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
    return records;
}

std::vector<ResultRecord> read_result_jsonl_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_result_jsonl(in);
}

ResultRecord to_result_record(const TrialRecord& trial) {
    ResultRecord r;
    r.id = trial.id;
    r.valid = trial.valid;
    r.lg_eps = trial.lg_eps;
    r.camera = trial.camera;
    r.inliers = trial.inliers;
    r.pairs_tested = trial.pairs_tested;
    r.camera_gt = trial.camera_gt;
    r.meters_per_pixel = trial.meters_per_pixel;
    r.out_of_bounds = trial.out_of_bounds;
    return r;
}

void write_trial_jsonl_file(const std::string& path,
                            const std::vector<TrialRecord>& trials) {
    auto out = create_or_throw(path);
    for (const TrialRecord& t : trials) {
        json j = result_to_json(to_result_record(t));
        j["inlier_precision"] = t.inlier_precision;
        j["inlier_recall"] = t.inlier_recall;
        if (t.loc_error_m) j["loc_error_m"] = *t.loc_error_m;
        if (t.heading_error_deg) j["heading_error_deg"] = *t.heading_error_deg;
        out << j.dump() << '\n';
    }
}

EvalRecord to_eval_record(const ResultRecord& r, double default_mpp) {
    EvalRecord e;
    e.id = r.id;
    e.predicted = r.camera;
    e.valid = r.valid;
    e.lg_eps = r.lg_eps;
    e.ground_truth = r.camera_gt;
    e.reference_correct = r.reference_correct;
    e.meters_per_pixel = r.meters_per_pixel.value_or(default_mpp);
    return e;
}

std::map<std::string, std::string> read_key_value(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_key_value(in);
}

NullModelParams load_null_model(const std::string& path) {
    const auto kv = read_key_value_file(path);
    NullModelParams p;
    p.t1 = require_double(kv, "t1", path);
    p.t2 = require_double(kv, "t2", path);
    p.A = require_double(kv, "A", path);
    p.B = require_double(kv, "B", path);
    // C and K follow from the invariants when not stored explicitly.
    const auto c = optional_double(kv, "C", path);
    const auto k = optional_double(kv, "K", path);
    const NullModelParams derived = NullModelParams::from_linear(p.t1, p.t2, p.A, p.B);
    p.C = c.value_or(derived.C);
    p.K = k.value_or(derived.K);
    return p;
}

void save_null_model(const std::string& path, const NullModelParams& params) {
    auto out = create_or_throw(path);
    out.precision(17);
    out << "t1=" << params.t1 << "\nt2=" << params.t2 << "\nA=" << params.A
        << "\nB=" << params.B << "\nC=" << params.C << "\nK=" << params.K << '\n';
}

ScenarioConfig load_scenario_config(const std::string& path) {
    const auto kv = read_key_value_file(path);
    ScenarioConfig cfg;
    const auto get = [&](const char* key, double fallback) {
        return optional_double(kv, key, path).value_or(fallback);
    };
    cfg.n = static_cast<int>(get("n", cfg.n));
    cfg.seed = static_cast<std::uint64_t>(get("seed", static_cast<double>(cfg.seed)));
    cfg.outlier_fraction = get("outlier_fraction", cfg.outlier_fraction);
    cfg.bearing_noise_sigma_deg = get("bearing_noise_sigma_deg", cfg.bearing_noise_sigma_deg);
    cfg.location_noise_sigma_px = get("location_noise_sigma_px", cfg.location_noise_sigma_px);
    cfg.range_min_px = get("range_min_px", cfg.range_min_px);
    cfg.range_max_px = get("range_max_px", cfg.range_max_px);
    cfg.heading_prior_half_width_deg =
        get("heading_prior_half_width_deg", cfg.heading_prior_half_width_deg);
    cfg.sector_d1_px = get("sector_d1_px", cfg.sector_d1_px);
    cfg.sector_d2_px = get("sector_d2_px", cfg.sector_d2_px);
    cfg.sector_half_angle_deg = get("sector_half_angle_deg", cfg.sector_half_angle_deg);
    cfg.meters_per_pixel = get("meters_per_pixel", cfg.meters_per_pixel);
    cfg.ref_width_px = static_cast<int>(get("ref_width_px", cfg.ref_width_px));
    cfg.ref_height_px = static_cast<int>(get("ref_height_px", cfg.ref_height_px));
    cfg.center_jitter_px = get("center_jitter_px", cfg.center_jitter_px);
    cfg.validate();
    return cfg;
}

void save_scenario_config(const std::string& path, const ScenarioConfig& cfg) {
    auto out = create_or_throw(path);
    out.precision(17);
    out << "n=" << cfg.n << "\nseed=" << cfg.seed
        << "\noutlier_fraction=" << cfg.outlier_fraction
        << "\nbearing_noise_sigma_deg=" << cfg.bearing_noise_sigma_deg
        << "\nlocation_noise_sigma_px=" << cfg.location_noise_sigma_px
        << "\nrange_min_px=" << cfg.range_min_px
        << "\nrange_max_px=" << cfg.range_max_px
        << "\nheading_prior_half_width_deg=" << cfg.heading_prior_half_width_deg
        << "\nsector_d1_px=" << cfg.sector_d1_px
        << "\nsector_d2_px=" << cfg.sector_d2_px
        << "\nsector_half_angle_deg=" << cfg.sector_half_angle_deg
        << "\nmeters_per_pixel=" << cfg.meters_per_pixel
        << "\nref_width_px=" << cfg.ref_width_px
        << "\nref_height_px=" << cfg.ref_height_px
        << "\ncenter_jitter_px=" << cfg.center_jitter_px << '\n';
}

SlicePlan load_slice_plan(const std::string& path) {
    const auto kv = read_key_value_file(path);
    SlicePlan plan;
    const auto get = [&](const char* key, double fallback) {
        return optional_double(kv, key, path).value_or(fallback);
    };
    plan.n = static_cast<int>(get("n", plan.n));
    plan.hfov_deg = get("hfov_deg", plan.hfov_deg);
    plan.vfov_deg = get("vfov_deg", plan.vfov_deg);
    plan.vfov_center_rad = get("vfov_center_deg", plan.vfov_center_rad * kRadToDeg) * kDegToRad;
    plan.slice_px = static_cast<int>(get("slice_px", plan.slice_px));
    plan.validate();
    return plan;
}

void save_slice_plan(const std::string& path, const SlicePlan& plan) {
    auto out = create_or_throw(path);
    out.precision(17);
    out << "n=" << plan.n << "\nhfov_deg=" << plan.hfov_deg
        << "\nvfov_deg=" << plan.vfov_deg
        << "\nvfov_center_deg=" << plan.vfov_center_rad * kRadToDeg
        << "\nslice_px=" << plan.slice_px << '\n';
    out << "# hfov centers (deg):";
    for (int i = 0; i < plan.n; ++i)
        out << ' ' << plan.hfov_center_rad(i) * kRadToDeg;
    out << '\n';
}

GeoConfig load_geo_config(const std::string& path) {
    const auto kv = read_key_value_file(path);
    GeoConfig geo;
    const auto get = [&](const char* key, double fallback) {
        return optional_double(kv, key, path).value_or(fallback);
    };
    geo.transform.ref_width = static_cast<int>(get("ref_width_px", geo.transform.ref_width));
    geo.transform.ref_height = static_cast<int>(get("ref_height_px", geo.transform.ref_height));
    geo.transform.meters_per_pixel = get("meters_per_pixel", geo.transform.meters_per_pixel);
    geo.transform.camera_east_m = get("camera_east_m", geo.transform.camera_east_m);
    geo.transform.camera_north_m = get("camera_north_m", geo.transform.camera_north_m);
    geo.camera_height_m = get("camera_height_m", geo.camera_height_m);
    return geo;
}

void save_geo_config(const std::string& path, const GeoConfig& geo) {
    auto out = create_or_throw(path);
    out.precision(17);
    out << "ref_width_px=" << geo.transform.ref_width
        << "\nref_height_px=" << geo.transform.ref_height
        << "\nmeters_per_pixel=" << geo.transform.meters_per_pixel
        << "\ncamera_east_m=" << geo.transform.camera_east_m
        << "\ncamera_north_m=" << geo.transform.camera_north_m
        << "\ncamera_height_m=" << geo.camera_height_m << '\n';
}

void write_metrics_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    out << "split,records,valid,pos_pct,mean_loc_m,median_loc_m,mean_ori_deg,median_ori_deg";
    if (!rows.empty()) {
        for (double t : rows.front().second.loc_thresholds_m)
            out << ",below_" << t << "m_pct";
        for (double t : rows.front().second.ori_thresholds_deg)
            out << ",below_" << t << "deg_pct";
    }
    out << ",potn,rotn,f1,acc,tp,fp,tn,fn\n";

    const auto opt = [](std::optional<double> v) {
        if (!v) return std::string{};
        std::ostringstream ss;
        ss.precision(12);
        ss << *v;
        return ss.str();
    };
    out.precision(12);
    for (const auto& [label, m] : rows) {
        out << label << ',' << m.total_records << ',' << m.valid_records << ','
            << m.pos_pct << ',' << opt(m.mean_loc_m) << ',' << opt(m.median_loc_m)
            << ',' << opt(m.mean_ori_deg) << ',' << opt(m.median_ori_deg);
        for (double pct : m.loc_below_pct) out << ',' << pct;
        for (double pct : m.ori_below_pct) out << ',' << pct;
        out << ',' << opt(m.rates.potn) << ',' << opt(m.rates.rotn) << ','
            << opt(m.rates.f1) << ',' << m.rates.acc << ',' << m.confusion.tp << ','
            << m.confusion.fp << ',' << m.confusion.tn << ',' << m.confusion.fn
            << '\n';
    }
}

void write_metrics_csv_file(const std::string& path,
                            const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    auto out = create_or_throw(path);
    write_metrics_csv(out, rows);
}

} // namespace sliceloc
