/**
 * @file eval.hpp
 * @brief Batch evaluation metrics: localization/orientation errors, threshold
 *        buckets, and the negative-detection rates PoTN/RoTN/F1/Acc.
 */

#ifndef SLICELOC_EVAL_HPP
#define SLICELOC_EVAL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sliceloc/geometry.hpp"

namespace sliceloc {

struct EvalRecord {
    std::string id;
    std::optional<CameraPose> predicted; ///< present implies valid
    bool valid = false;
    double lg_eps = 0.0; ///< may be +/- infinity
    std::optional<CameraPose> ground_truth;
    std::optional<bool> reference_correct;
    double meters_per_pixel = 0.11;
};

/// Which records count as ground-truth negatives.
enum class NegativeRule {
    LocalizationErrorOver10m, ///< failed localization: no pose or error > 10 m
    ReferenceIncorrect,       ///< reference-validation mode
};

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

struct NegativeRates {
    std::optional<double> potn; ///< TN / (TN + FN); absent when undefined
    std::optional<double> rotn; ///< TN / (TN + FP)
    std::optional<double> f1;   ///< harmonic mean of PoTN and RoTN
    double acc = 0.0;           ///< (TN + TP) / total
};

struct MetricsReport {
    std::size_t total_records = 0;
    std::size_t valid_records = 0;
    std::size_t scored_records = 0; ///< records entering the error statistics
    double pos_pct = 0.0;           ///< percent with valid = true (PoS = PoR)

    std::optional<double> mean_loc_m;
    std::optional<double> median_loc_m;
    std::optional<double> mean_ori_deg;
    std::optional<double> median_ori_deg;

    std::vector<double> loc_thresholds_m;
    std::vector<double> loc_below_pct;
    std::vector<double> ori_thresholds_deg;
    std::vector<double> ori_below_pct;

    ConfusionCounts confusion;
    NegativeRates rates;
};

/// Euclidean pixel distance scaled to meters.
double localization_error_m(const CameraPose& predicted, const CameraPose& truth,
                            double meters_per_pixel);

/// Minimal circular heading difference in degrees [0, 180].
double orientation_error_deg(const CameraPose& predicted, const CameraPose& truth);

/**
 * Confusion counts and negative-detection rates at decision threshold `tau`:
 * a record is predicted-negative iff lg_eps >= tau. Throws EmptyInput on an
 * empty span.
 */
std::pair<ConfusionCounts, NegativeRates>
confusion_and_rates(std::span<const EvalRecord> records, double tau, NegativeRule rule);

/**
 * Full metrics report. Error statistics run over valid records that carry
 * both poses; with `include_invalid` the threshold buckets use all records as
 * denominator (records without a pose can never fall below a threshold).
 * Medians use the lower-middle element for even counts.
 */
MetricsReport metrics(std::span<const EvalRecord> records,
                      std::span<const double> loc_thresholds_m,
                      std::span<const double> ori_thresholds_deg, double tau = 0.0,
                      NegativeRule rule = NegativeRule::LocalizationErrorOver10m,
                      bool include_invalid = false);

/// Report with the standard thresholds {1,3,5,8,10} m and degrees.
MetricsReport metrics(std::span<const EvalRecord> records, double tau = 0.0,
                      NegativeRule rule = NegativeRule::LocalizationErrorOver10m,
                      bool include_invalid = false);

} // namespace sliceloc

#endif // SLICELOC_EVAL_HPP
