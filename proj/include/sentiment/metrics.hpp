#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "sentiment/corpus.hpp"

namespace sentiment {

/// 3x3 counts. Rows are the predicted class, columns the actual class.
class ConfusionMatrix3 {
public:
    using Counts = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

    ConfusionMatrix3() = default;
    explicit ConfusionMatrix3(const Counts& counts) : counts_(counts) {}

    std::size_t operator()(std::size_t predicted, std::size_t actual) const
    {
        return counts_.at(predicted).at(actual);
    }
    void add(Sentiment predicted, Sentiment actual) noexcept
    {
        ++counts_[class_index(predicted)][class_index(actual)];
    }
    std::size_t total() const noexcept;
    std::size_t trace() const noexcept;
    const Counts& counts() const noexcept { return counts_; }

    friend bool operator==(const ConfusionMatrix3&, const ConfusionMatrix3&) = default;

private:
    Counts counts_{};
};

struct BinaryCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const BinaryCounts&, const BinaryCounts&) = default;
};

/// Throws LengthMismatch when the spans differ in length.
ConfusionMatrix3 confusion(std::span<const Sentiment> predictions,
                           std::span<const Sentiment> actuals);
/// Integer class indices; throws LabelOutOfRange outside {0, 1, 2}.
ConfusionMatrix3 confusion(std::span<const int> predictions, std::span<const int> actuals);

BinaryCounts one_vs_rest(const ConfusionMatrix3& cm, Sentiment positive) noexcept;

// Zero denominators yield 0.
double precision(const BinaryCounts& c) noexcept;  // TP / (TP + FP)
double recall(const BinaryCounts& c) noexcept;     // TP / (TP + FN)
double f1(const BinaryCounts& c) noexcept;         // 2PR / (P + R)
double accuracy(const BinaryCounts& c) noexcept;   // (TP + TN) / total
/// Single-threshold AUC: (R - FP / (FP + TN) + 1) / 2.
double auc(const BinaryCounts& c) noexcept;

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
};

struct MetricsReport {
    /// One-vs-rest scores in (Negative, Neutral, Positive) order.
    std::array<ClassScores, kNumClasses> per_class{};
    /// Unweighted mean of per_class.
    ClassScores macro;
    /// trace / total.
    double accuracy = 0.0;
};

MetricsReport macro_report(const ConfusionMatrix3& cm) noexcept;

/// Rows -1, 0, 1 and macro with columns precision,recall,f1,auc, followed by
/// a final `accuracy,<value>` line.
std::string report_csv(const MetricsReport& report);
/// Header `predicted\actual,-1,0,1` then one row per predicted class.
std::string confusion_csv(const ConfusionMatrix3& cm);

}  // namespace sentiment
