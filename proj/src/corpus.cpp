#include "sentiment/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"
#include "sentiment/tensor.hpp"

namespace sentiment {

namespace {

bool is_blank(std::string_view s)
{
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); });
}

std::size_t column_of(const csv::Row& header, std::string_view name)
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(ErrorCode::MissingColumn, "header has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

LabeledCorpus subset(const LabeledCorpus& corpus, const std::vector<std::size_t>& indices)
{
    LabeledCorpus out;
    out.source_path = corpus.source_path;
    out.examples.reserve(indices.size());
    for (auto i : indices) {
        out.examples.push_back(corpus.examples[i]);
    }
    return out;
}

}  // namespace

Sentiment class_from_index(std::size_t index)
{
    if (index >= kNumClasses) {
        throw Error(ErrorCode::LabelOutOfRange, "class index " + std::to_string(index));
    }
    return static_cast<Sentiment>(index);
}

int polarity(Sentiment s) noexcept
{
    return static_cast<int>(class_index(s)) - 1;
}

std::optional<Sentiment> parse_polarity(std::string_view text) noexcept
{
    if (text == "-1") {
        return Sentiment::Negative;
    }
    if (text == "0") {
        return Sentiment::Neutral;
    }
    if (text == "1") {
        return Sentiment::Positive;
    }
    return std::nullopt;
}

void SplitSpec::validate() const
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
    }
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "validation fraction must lie in [0, 1)");
    }
    if (!(train_fraction + val_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "train + validation fractions must leave room for a test partition");
    }
}

LabeledCorpus load_corpus(const std::string& path, std::string_view text_column,
                          std::string_view label_column)
{
    return parse_corpus(csv::read_file(path), text_column, label_column, path);
}

LabeledCorpus parse_corpus(std::string_view csv_text, std::string_view text_column,
                           std::string_view label_column, std::string source_path)
{
    auto rows = csv::parse(csv_text);
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyFile, "'" + source_path + "' has no header row");
    }
    const auto text_col = column_of(rows.front(), text_column);
    const auto label_col = column_of(rows.front(), label_column);
    if (rows.size() == 1) {
        throw Error(ErrorCode::EmptyFile, "'" + source_path + "' has a header but no data rows");
    }

    LabeledCorpus corpus;
    corpus.source_path = std::move(source_path);
    corpus.examples.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        auto& row = rows[r];
        const std::string empty;
        const std::string& label_text = label_col < row.size() ? row[label_col] : empty;
        auto label = parse_polarity(label_text);
        if (!label) {
            throw UnparsableLabel(r, label_text);
        }
        std::string text = text_col < row.size() ? std::move(row[text_col]) : std::string();
        if (is_blank(text)) {
            ++corpus.skipped_blank;
            continue;
        }
        corpus.examples.push_back({std::move(text), *label});
    }
    return corpus;
}

ClassHistogram class_histogram(const LabeledCorpus& corpus) noexcept
{
    ClassHistogram counts{};
    for (const auto& ex : corpus.examples) {
        ++counts[class_index(ex.label)];
    }
    return counts;
}

ClassHistogram class_histogram(const std::vector<Sentiment>& labels) noexcept
{
    ClassHistogram counts{};
    for (auto label : labels) {
        ++counts[class_index(label)];
    }
    return counts;
}

LabeledCorpus remove_duplicates(const LabeledCorpus& corpus)
{
    LabeledCorpus out;
    out.source_path = corpus.source_path;
    out.skipped_blank = corpus.skipped_blank;
    std::unordered_set<std::string_view> seen;
    for (const auto& ex : corpus.examples) {
        if (seen.insert(ex.text).second) {
            out.examples.push_back(ex);
        }
    }
    return out;
}

SplitIndices stratified_split_indices(const std::vector<Sentiment>& labels, const SplitSpec& spec)
{
    spec.validate();
    const std::array<double, 3> fractions{spec.train_fraction, spec.val_fraction,
                                          1.0 - spec.train_fraction - spec.val_fraction};
    SplitIndices out;
    std::array<std::vector<std::size_t>*, 3> parts{&out.train, &out.val, &out.test};

    const Rng root(spec.seed);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (class_index(labels[i]) == c) {
                members.push_back(i);
            }
        }
        if (members.empty()) {
            continue;
        }
        Rng rng = root.split(c);
        shuffle(members, rng);

        // Largest remainder: floor each share, hand leftovers to the largest
        // fractional parts (ties go to the earlier partition).
        const auto n = members.size();
        std::array<std::size_t, 3> counts{};
        std::array<double, 3> remainders{};
        std::size_t assigned = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            const double exact = fractions[p] * static_cast<double>(n);
            counts[p] = static_cast<std::size_t>(std::floor(exact));
            remainders[p] = exact - std::floor(exact);
            assigned += counts[p];
        }
        std::array<std::size_t, 3> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return remainders[a] > remainders[b]; });
        for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
            ++counts[order[k % 3]];
        }

        for (std::size_t p = 0; p < 3; ++p) {
            if (counts[p] == 0 && fractions[p] > 0.0) {
                static constexpr const char* names[] = {"train", "validation", "test"};
                throw Error(ErrorCode::DegenerateSplit,
                            std::string(names[p]) + " partition would receive no examples of class "
                                + std::to_string(polarity(class_from_index(c))) + " ("
                                + std::to_string(n) + " available)");
            }
        }

        std::size_t offset = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            parts[p]->insert(parts[p]->end(), members.begin() + static_cast<long>(offset),
                             members.begin() + static_cast<long>(offset + counts[p]));
            offset += counts[p];
        }
    }
    for (auto* part : parts) {
        std::sort(part->begin(), part->end());
    }
    return out;
}

CorpusSplit stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec)
{
    std::vector<Sentiment> labels;
    labels.reserve(corpus.size());
    for (const auto& ex : corpus.examples) {
        labels.push_back(ex.label);
    }
    auto idx = stratified_split_indices(labels, spec);

    CorpusSplit out;
    out.train = subset(corpus, idx.train);
    out.val = subset(corpus, idx.val);
    out.test = subset(corpus, idx.test);
    out.train_indices = std::move(idx.train);
    out.val_indices = std::move(idx.val);
    out.test_indices = std::move(idx.test);
    return out;
}

std::string histogram_csv(const ClassHistogram& histogram)
{
    std::ostringstream out;
    out << "class,count\n";
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        out << polarity(class_from_index(c)) << ',' << histogram[c] << '\n';
    }
    return out.str();
}

}  // namespace sentiment
