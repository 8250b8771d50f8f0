#include "sentiment/metrics.hpp"

#include <sstream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"

namespace sentiment {

namespace {

double ratio(std::size_t num, std::size_t den) noexcept
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t ConfusionMatrix3::total() const noexcept
{
    std::size_t sum = 0;
    for (const auto& row : counts_) {
        for (auto v : row) {
            sum += v;
        }
    }
    return sum;
}

std::size_t ConfusionMatrix3::trace() const noexcept
{
    return counts_[0][0] + counts_[1][1] + counts_[2][2];
}

ConfusionMatrix3 confusion(std::span<const Sentiment> predictions,
                           std::span<const Sentiment> actuals)
{
    if (predictions.size() != actuals.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(predictions.size())
                                                   + " predictions for "
                                                   + std::to_string(actuals.size()) + " labels");
    }
    ConfusionMatrix3 cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        cm.add(predictions[i], actuals[i]);
    }
    return cm;
}

ConfusionMatrix3 confusion(std::span<const int> predictions, std::span<const int> actuals)
{
    if (predictions.size() != actuals.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(predictions.size())
                                                   + " predictions for "
                                                   + std::to_string(actuals.size()) + " labels");
    }
    const auto to_class = [](int v) {
        if (v < 0 || v >= static_cast<int>(kNumClasses)) {
            throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(v));
        }
        return static_cast<Sentiment>(v);
    };
    ConfusionMatrix3 cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        cm.add(to_class(predictions[i]), to_class(actuals[i]));
    }
    return cm;
}

BinaryCounts one_vs_rest(const ConfusionMatrix3& cm, Sentiment positive) noexcept
{
    const auto c = class_index(positive);
    const auto& m = cm.counts();
    BinaryCounts out;
    out.tp = m[c][c];
    for (std::size_t other = 0; other < kNumClasses; ++other) {
        if (other != c) {
            out.fp += m[c][other];
            out.fn += m[other][c];
        }
    }
    out.tn = cm.total() - out.tp - out.fp - out.fn;
    return out;
}

double precision(const BinaryCounts& c) noexcept
{
    return ratio(c.tp, c.tp + c.fp);
}

double recall(const BinaryCounts& c) noexcept
{
    return ratio(c.tp, c.tp + c.fn);
}

double f1(const BinaryCounts& c) noexcept
{
    const double p = precision(c);
    const double r = recall(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double accuracy(const BinaryCounts& c) noexcept
{
    return ratio(c.tp + c.tn, c.total());
}

double auc(const BinaryCounts& c) noexcept
{
    return (recall(c) - ratio(c.fp, c.fp + c.tn) + 1.0) / 2.0;
}

MetricsReport macro_report(const ConfusionMatrix3& cm) noexcept
{
    MetricsReport report;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto counts = one_vs_rest(cm, static_cast<Sentiment>(c));
        auto& s = report.per_class[c];
        s = {precision(counts), recall(counts), f1(counts), auc(counts)};
        report.macro.precision += s.precision / kNumClasses;
        report.macro.recall += s.recall / kNumClasses;
        report.macro.f1 += s.f1 / kNumClasses;
        report.macro.auc += s.auc / kNumClasses;
    }
    report.accuracy = ratio(cm.trace(), cm.total());
    return report;
}

std::string report_csv(const MetricsReport& report)
{
    std::ostringstream out;
    const auto row = [&](const std::string& label, const ClassScores& s) {
        out << label << ',' << format_number(s.precision) << ',' << format_number(s.recall) << ','
            << format_number(s.f1) << ',' << format_number(s.auc) << '\n';
    };
    out << "class,precision,recall,f1,auc\n";
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        row(std::to_string(polarity(static_cast<Sentiment>(c))), report.per_class[c]);
    }
    row("macro", report.macro);
    out << "accuracy," << format_number(report.accuracy) << '\n';
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix3& cm)
{
    std::ostringstream out;
    out << "predicted\\actual,-1,0,1\n";
    for (std::size_t p = 0; p < kNumClasses; ++p) {
        out << polarity(static_cast<Sentiment>(p));
        for (std::size_t a = 0; a < kNumClasses; ++a) {
            out << ',' << cm(p, a);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace sentiment
