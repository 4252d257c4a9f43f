#include "fairaudit/roc.hpp"

#include <algorithm>
#include <cmath>

#include "fairaudit/errors.hpp"

namespace fairaudit {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

void split_by_label(std::span<const double> scores, std::span<const int> labels,
                    std::vector<double>& positives, std::vector<double>& negatives) {
    if (scores.size() != labels.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "scores and labels differ in length");
    }
    positives.clear();
    negatives.clear();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) positives.push_back(scores[i]);
        else if (labels[i] == 0) negatives.push_back(scores[i]);
        else throw AuditError(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
    if (positives.empty() || negatives.empty()) {
        throw AuditError(ErrorCode::DegenerateLabels, "need at least one observation per class");
    }
}

// Pairwise win count of `value` against the sorted opponents: 1 per strictly
// smaller opponent, 0.5 per tie. Exact in binary arithmetic.
double wins_against_sorted(double value, const std::vector<double>& sorted) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), value);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), value);
    double below = static_cast<double>(lo - sorted.begin());
    double ties = static_cast<double>(hi - lo);
    return below + 0.5 * ties;
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) {
        throw AuditError(ErrorCode::TooFewPerClass, "variance needs >= 2 observations per class");
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

double sample_covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) {
        throw AuditError(ErrorCode::TooFewPerClass, "covariance needs >= 2 observations per class");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
    return s / static_cast<double>(xs.size() - 1);
}

RocComparison finish_comparison(double auc_a, double auc_b, double variance, ComparisonMode mode) {
    RocComparison cmp;
    cmp.auc_a = auc_a;
    cmp.auc_b = auc_b;
    cmp.diff = auc_a - auc_b;
    cmp.variance = variance;
    cmp.mode = mode;
    if (variance < 1e-15 && cmp.diff == 0.0) {
        cmp.z = 0.0;
        cmp.p_value = 1.0;
    } else {
        cmp.z = cmp.diff / std::sqrt(variance);
        cmp.p_value = 2.0 * (1.0 - normal_cdf(std::abs(cmp.z)));
    }
    double half = kZ95 * std::sqrt(variance);
    cmp.ci_lo = cmp.diff - half;
    cmp.ci_hi = cmp.diff + half;
    return cmp;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
    std::vector<double> positives, negatives;
    split_by_label(scores, labels, positives, negatives);
    std::sort(negatives.begin(), negatives.end());
    double wins = 0.0;  // multiples of 0.5, exact
    for (double x : positives) wins += wins_against_sorted(x, negatives);
    return wins / (static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

StructuralComponents structural_components(std::span<const double> scores,
                                           std::span<const int> labels) {
    std::vector<double> positives, negatives;
    split_by_label(scores, labels, positives, negatives);
    std::vector<double> sorted_pos = positives;
    std::vector<double> sorted_neg = negatives;
    std::sort(sorted_pos.begin(), sorted_pos.end());
    std::sort(sorted_neg.begin(), sorted_neg.end());

    const double m = static_cast<double>(positives.size());
    const double n = static_cast<double>(negatives.size());

    StructuralComponents out;
    out.v10.reserve(positives.size());
    out.v01.reserve(negatives.size());
    double total = 0.0;
    for (double x : positives) {
        double w = wins_against_sorted(x, sorted_neg);
        total += w;
        out.v10.push_back(w / n);
    }
    for (double y : negatives) {
        auto lo = std::lower_bound(sorted_pos.begin(), sorted_pos.end(), y);
        auto hi = std::upper_bound(sorted_pos.begin(), sorted_pos.end(), y);
        double below = static_cast<double>(lo - sorted_pos.begin());
        double ties = static_cast<double>(hi - lo);
        double w = (m - below - ties) + 0.5 * ties;  // positives above y, ties half
        out.v01.push_back(w / m);
    }
    out.auc = total / (m * n);
    return out;
}

RocComparison delong_correlated(std::span<const double> scores_a,
                                std::span<const double> scores_b,
                                std::span<const int> labels) {
    if (scores_a.size() != scores_b.size() || scores_a.size() != labels.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "paired comparison requires aligned inputs");
    }
    StructuralComponents a = structural_components(scores_a, labels);
    StructuralComponents b = structural_components(scores_b, labels);

    const double m = static_cast<double>(a.v10.size());
    const double n = static_cast<double>(a.v01.size());
    double s10_aa = sample_variance(a.v10);
    double s10_bb = sample_variance(b.v10);
    double s10_ab = sample_covariance(a.v10, b.v10);
    double s01_aa = sample_variance(a.v01);
    double s01_bb = sample_variance(b.v01);
    double s01_ab = sample_covariance(a.v01, b.v01);

    double variance = (s10_aa + s10_bb - 2.0 * s10_ab) / m + (s01_aa + s01_bb - 2.0 * s01_ab) / n;
    return finish_comparison(a.auc, b.auc, variance, ComparisonMode::Correlated);
}

RocComparison delong_uncorrelated(std::span<const double> scores_a, std::span<const int> labels_a,
                                  std::span<const double> scores_b, std::span<const int> labels_b) {
    StructuralComponents a = structural_components(scores_a, labels_a);
    StructuralComponents b = structural_components(scores_b, labels_b);
    double var_a = sample_variance(a.v10) / static_cast<double>(a.v10.size()) +
                   sample_variance(a.v01) / static_cast<double>(a.v01.size());
    double var_b = sample_variance(b.v10) / static_cast<double>(b.v10.size()) +
                   sample_variance(b.v01) / static_cast<double>(b.v01.size());
    return finish_comparison(a.auc, b.auc, var_a + var_b, ComparisonMode::Uncorrelated);
}

OperatingPoint operating_threshold(std::span<const double> scores, std::span<const int> labels,
                                   double target_sens) {
    if (!(target_sens > 0.0 && target_sens <= 1.0)) {
        throw AuditError(ErrorCode::InvalidArgument, "target sensitivity must be in (0,1]");
    }
    std::vector<double> positives;
    std::size_t positives_total = 0;
    if (scores.size() != labels.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "scores and labels differ in length");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) positives.push_back(scores[i]);
    }
    positives_total = positives.size();
    if (positives_total == 0) {
        throw AuditError(ErrorCode::DegenerateLabels, "threshold selection needs >= 1 positive");
    }
    std::sort(positives.begin(), positives.end());

    // Candidates: all observed scores plus 0; choose the largest with
    // sensitivity(t) >= target under the ties-positive rule.
    std::vector<double> candidates(scores.begin(), scores.end());
    candidates.push_back(0.0);
    std::sort(candidates.begin(), candidates.end(), std::greater<double>());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (double t : candidates) {
        auto first_ge = std::lower_bound(positives.begin(), positives.end(), t);
        double sens = static_cast<double>(positives.end() - first_ge) /
                      static_cast<double>(positives_total);
        if (sens >= target_sens) return OperatingPoint{t};
    }
    return OperatingPoint{0.0};  // unreachable: t=0 has sensitivity 1
}

ConfusionSummary confusion_at(std::span<const double> scores, std::span<const int> labels,
                              const OperatingPoint& op) {
    if (scores.size() != labels.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "scores and labels differ in length");
    }
    ConfusionSummary cm;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool predicted = scores[i] >= op.threshold;
        if (labels[i] == 1) {
            predicted ? ++cm.tp : ++cm.fn;
        } else {
            predicted ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

}  // namespace fairaudit
