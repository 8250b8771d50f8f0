#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentiment {

/// Sentiment class. Stored as a contiguous index; the -1/0/1 encoding
/// appears only at I/O boundaries.
enum class Sentiment : std::uint8_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumClasses = 3;

constexpr std::size_t class_index(Sentiment s) noexcept { return static_cast<std::size_t>(s); }
Sentiment class_from_index(std::size_t index);

/// -1 / 0 / 1
int polarity(Sentiment s) noexcept;
std::optional<Sentiment> parse_polarity(std::string_view text) noexcept;

struct LabeledExample {
    std::string text;
    Sentiment label;

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct LabeledCorpus {
    std::vector<LabeledExample> examples;
    std::string source_path;
    /// Rows dropped because their text was blank.
    std::size_t skipped_blank = 0;

    std::size_t size() const noexcept { return examples.size(); }
    bool empty() const noexcept { return examples.empty(); }
};

/// Counts in (Negative, Neutral, Positive) order.
using ClassHistogram = std::array<std::size_t, kNumClasses>;

struct SplitSpec {
    double train_fraction = 0.8;
    double val_fraction = 0.1;
    std::uint64_t seed = 42;

    void validate() const;
};

struct CorpusSplit {
    LabeledCorpus train;
    LabeledCorpus val;
    LabeledCorpus test;
    /// Source indices of each partition, ascending.
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> val_indices;
    std::vector<std::size_t> test_indices;
};

LabeledCorpus load_corpus(const std::string& path, std::string_view text_column = "text",
                          std::string_view label_column = "label");

/// Same as load_corpus but from in-memory CSV text.
LabeledCorpus parse_corpus(std::string_view csv_text, std::string_view text_column = "text",
                           std::string_view label_column = "label",
                           std::string source_path = "<memory>");

ClassHistogram class_histogram(const LabeledCorpus& corpus) noexcept;
ClassHistogram class_histogram(const std::vector<Sentiment>& labels) noexcept;

/// Keeps the first occurrence of each exact text.
LabeledCorpus remove_duplicates(const LabeledCorpus& corpus);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Splits positions 0..labels.size()-1 by class. See stratified_split.
SplitIndices stratified_split_indices(const std::vector<Sentiment>& labels, const SplitSpec& spec);

/// Per-class seeded shuffle, then largest-remainder allocation of each
/// class's examples to train/val/test so every partition is within one
/// example of its exact share.
CorpusSplit stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec);

/// CSV `class,count`, classes in order -1, 0, 1.
std::string histogram_csv(const ClassHistogram& histogram);

}  // namespace sentiment
