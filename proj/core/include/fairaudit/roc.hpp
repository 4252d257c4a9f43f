#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fairaudit {

// 97.5% standard normal quantile used for all 95% confidence intervals.
inline constexpr double kZ95 = 1.959964;

double normal_cdf(double z);

// Empirical AUROC / Mann-Whitney estimate: mean over all positive-negative
// pairs of 1 if the positive outranks the negative, 0.5 on ties.
// Labels are binary {0,1}; throws DegenerateLabels on single-class input.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Per-observation structural components: v10[i] is the mean pairwise win rate
// of positive i against all negatives, v01[j] the mirror for negative j.
// mean(v10) == mean(v01) == AUROC.
struct StructuralComponents {
    double auc = 0.0;
    std::vector<double> v10;  // aligned with positives in input order
    std::vector<double> v01;  // aligned with negatives in input order
};
StructuralComponents structural_components(std::span<const double> scores,
                                           std::span<const int> labels);

enum class ComparisonMode { Correlated, Uncorrelated };

struct RocComparison {
    double auc_a = 0.0;
    double auc_b = 0.0;
    double diff = 0.0;      // auc_a - auc_b
    double variance = 0.0;
    double z = 0.0;
    double p_value = 1.0;   // two-sided normal
    double ci_lo = 0.0;     // diff - kZ95 * sqrt(variance)
    double ci_hi = 0.0;
    ComparisonMode mode = ComparisonMode::Correlated;
};

// Paired comparison: both score lists are aligned with one label vector.
// Variance combines the sample covariances (n-1 denominator) of the paired
// structural components. Requires >= 2 observations per class.
RocComparison delong_correlated(std::span<const double> scores_a,
                                std::span<const double> scores_b,
                                std::span<const int> labels);

// Independent-samples comparison: each curve comes from its own data, the
// variance is the sum of the per-sample AUC variances.
RocComparison delong_uncorrelated(std::span<const double> scores_a, std::span<const int> labels_a,
                                  std::span<const double> scores_b, std::span<const int> labels_b);

// Classification rule: predict positive iff score >= threshold.
struct OperatingPoint {
    double threshold = 0.0;
};

// Largest threshold among observed scores (plus 0) whose sensitivity on this
// population reaches the target. target_sens must lie in (0, 1].
OperatingPoint operating_threshold(std::span<const double> scores, std::span<const int> labels,
                                   double target_sens);

struct ConfusionSummary {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::optional<double> sensitivity() const {
        if (tp + fn == 0) return std::nullopt;
        return static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    std::optional<double> specificity() const {
        if (tn + fp == 0) return std::nullopt;
        return static_cast<double>(tn) / static_cast<double>(tn + fp);
    }
};

ConfusionSummary confusion_at(std::span<const double> scores, std::span<const int> labels,
                              const OperatingPoint& op);

}  // namespace fairaudit
