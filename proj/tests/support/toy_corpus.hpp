#pragma once

#include <array>
#include <string>
#include <vector>

#include "sentiment/corpus.hpp"
#include "sentiment/tensor.hpp"
#include "sentiment/vocabulary.hpp"

namespace sentiment::testing {

/// Keyword corpus: every sentence mixes shared filler words with one or two
/// keywords that only ever occur in its own class. Linearly separable.
struct ToyCorpus {
    std::vector<std::vector<std::string>> documents;
    std::vector<Sentiment> labels;
};

inline ToyCorpus make_toy_corpus(std::size_t per_class = 10, std::uint64_t seed = 7)
{
    static const std::array<std::vector<std::string>, 3> keywords = {{
        {"awful", "terribl", "fear", "panic", "deadli"},
        {"report", "updat", "announc", "schedul", "statist"},
        {"great", "relief", "hope", "recov", "thank"},
    }};
    static const std::vector<std::string> filler = {"monkeypox", "viru", "case", "peopl", "citi",
                                                    "week", "health", "vaccin", "news", "world"};
    Rng rng(seed);
    ToyCorpus out;
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<std::string> doc;
            const auto length = 3 + rng.uniform_index(4);
            for (std::size_t t = 0; t < length; ++t) {
                doc.push_back(filler[rng.uniform_index(filler.size())]);
            }
            const auto hits = 1 + rng.uniform_index(2);
            for (std::size_t h = 0; h < hits; ++h) {
                const auto pos = rng.uniform_index(doc.size() + 1);
                doc.insert(doc.begin() + static_cast<long>(pos),
                           keywords[c][rng.uniform_index(keywords[c].size())]);
            }
            out.documents.push_back(std::move(doc));
            out.labels.push_back(static_cast<Sentiment>(c));
        }
    }
    return out;
}

inline EncodedCorpus encode_corpus(const ToyCorpus& toy, const Vocabulary& vocab, std::size_t n)
{
    EncodedCorpus out;
    for (std::size_t i = 0; i < toy.documents.size(); ++i) {
        out.sequences.push_back(encode_and_pad(toy.documents[i], vocab, n));
        out.labels.push_back(toy.labels[i]);
    }
    return out;
}

}  // namespace sentiment::testing
