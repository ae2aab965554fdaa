#include "sliceloc/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace sliceloc {

namespace {

constexpr double kNegativeErrorThresholdM = 10.0;

// Lower-middle convention for even counts.
double median_of_sorted(const std::vector<double>& sorted) {
    return sorted[(sorted.size() - 1) / 2];
}

bool is_actual_negative(const EvalRecord& r, NegativeRule rule) {
    if (rule == NegativeRule::ReferenceIncorrect)
        return r.reference_correct.has_value() && !*r.reference_correct;
    // A record without a usable pose is a failed localization by definition.
    if (!r.predicted || !r.ground_truth) return true;
    return localization_error_m(*r.predicted, *r.ground_truth, r.meters_per_pixel) >
           kNegativeErrorThresholdM;
}

} // namespace

double localization_error_m(const CameraPose& predicted, const CameraPose& truth,
                            double meters_per_pixel) {
    return distance(predicted.location, truth.location) * meters_per_pixel;
}

double orientation_error_deg(const CameraPose& predicted, const CameraPose& truth) {
    return circular_diff_deg(predicted.heading.degrees(), truth.heading.degrees());
}

std::pair<ConfusionCounts, NegativeRates>
confusion_and_rates(std::span<const EvalRecord> records, double tau, NegativeRule rule) {
    if (records.empty()) throw EmptyInput("confusion_and_rates needs records");

    ConfusionCounts counts;
    for (const EvalRecord& r : records) {
        const bool predicted_negative = !(r.lg_eps < tau);
        const bool actual_negative = is_actual_negative(r, rule);
        if (predicted_negative) {
            (actual_negative ? counts.tn : counts.fn)++;
        } else {
            (actual_negative ? counts.fp : counts.tp)++;
        }
    }

    NegativeRates rates;
    if (counts.tn + counts.fn > 0)
        rates.potn = static_cast<double>(counts.tn) /
                     static_cast<double>(counts.tn + counts.fn);
    if (counts.tn + counts.fp > 0)
        rates.rotn = static_cast<double>(counts.tn) /
                     static_cast<double>(counts.tn + counts.fp);
    if (rates.potn && rates.rotn && (*rates.potn + *rates.rotn) > 0.0)
        rates.f1 = 2.0 * (*rates.potn) * (*rates.rotn) / (*rates.potn + *rates.rotn);
    rates.acc = static_cast<double>(counts.tn + counts.tp) /
                static_cast<double>(counts.total());
    return {counts, rates};
}

MetricsReport metrics(std::span<const EvalRecord> records,
                      std::span<const double> loc_thresholds_m,
                      std::span<const double> ori_thresholds_deg, double tau,
                      NegativeRule rule, bool include_invalid) {
    if (records.empty()) throw EmptyInput("metrics needs at least one record");

    MetricsReport report;
    report.total_records = records.size();
    report.loc_thresholds_m.assign(loc_thresholds_m.begin(), loc_thresholds_m.end());
    report.ori_thresholds_deg.assign(ori_thresholds_deg.begin(), ori_thresholds_deg.end());

    std::vector<double> loc_errors;
    std::vector<double> ori_errors;
    for (const EvalRecord& r : records) {
        if (r.valid) ++report.valid_records;
        if (!r.valid || !r.predicted || !r.ground_truth) continue;
        loc_errors.push_back(
            localization_error_m(*r.predicted, *r.ground_truth, r.meters_per_pixel));
        ori_errors.push_back(orientation_error_deg(*r.predicted, *r.ground_truth));
    }
    report.scored_records = loc_errors.size();
    report.pos_pct = 100.0 * static_cast<double>(report.valid_records) /
                     static_cast<double>(report.total_records);

    if (!loc_errors.empty()) {
        report.mean_loc_m = std::accumulate(loc_errors.begin(), loc_errors.end(), 0.0) /
                            static_cast<double>(loc_errors.size());
        report.mean_ori_deg = std::accumulate(ori_errors.begin(), ori_errors.end(), 0.0) /
                              static_cast<double>(ori_errors.size());
        std::vector<double> sorted_loc = loc_errors;
        std::vector<double> sorted_ori = ori_errors;
        std::sort(sorted_loc.begin(), sorted_loc.end());
        std::sort(sorted_ori.begin(), sorted_ori.end());
        report.median_loc_m = median_of_sorted(sorted_loc);
        report.median_ori_deg = median_of_sorted(sorted_ori);
    }

    // Threshold buckets; with include_invalid every record counts in the
    // denominator and pose-less records never clear a threshold.
    const double denom = static_cast<double>(include_invalid ? records.size()
                                                             : loc_errors.size());
    const auto below_pct = [&](const std::vector<double>& errors, double threshold) {
        if (denom == 0.0) return 0.0;
        const auto below = std::count_if(errors.begin(), errors.end(),
                                         [&](double e) { return e < threshold; });
        return 100.0 * static_cast<double>(below) / denom;
    };
    for (double t : loc_thresholds_m)
        report.loc_below_pct.push_back(below_pct(loc_errors, t));
    for (double t : ori_thresholds_deg)
        report.ori_below_pct.push_back(below_pct(ori_errors, t));

    const bool confusion_applicable =
        rule == NegativeRule::ReferenceIncorrect
            ? std::any_of(records.begin(), records.end(),
                          [](const EvalRecord& r) { return r.reference_correct.has_value(); })
            : std::any_of(records.begin(), records.end(),
                          [](const EvalRecord& r) { return r.ground_truth.has_value(); });
    if (confusion_applicable) {
        auto [counts, rates] = confusion_and_rates(records, tau, rule);
        report.confusion = counts;
        report.rates = rates;
    }
    return report;
}

MetricsReport metrics(std::span<const EvalRecord> records, double tau,
                      NegativeRule rule, bool include_invalid) {
    static constexpr std::array<double, 5> kLoc{1.0, 3.0, 5.0, 8.0, 10.0};
    static constexpr std::array<double, 5> kOri{1.0, 3.0, 5.0, 8.0, 10.0};
    return metrics(records, std::span<const double>(kLoc),
                   std::span<const double>(kOri), tau, rule, include_invalid);
}

} // namespace sliceloc
