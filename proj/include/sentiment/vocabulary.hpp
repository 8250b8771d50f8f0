#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentiment/corpus.hpp"

namespace sentiment {

using TokenId = std::uint32_t;

/// Token <-> id mapping. Ids 0 and 1 are reserved for padding and
/// out-of-vocabulary tokens; corpus tokens start at 2.
class Vocabulary {
public:
    static constexpr TokenId kPadId = 0;
    static constexpr TokenId kUnkId = 1;
    static constexpr std::string_view kPadToken = "<pad>";
    static constexpr std::string_view kUnkToken = "<unk>";

    Vocabulary();

    /// Tokens with corpus frequency >= min_frequency, ordered by descending
    /// frequency and then lexicographically.
    static Vocabulary build(const std::vector<std::vector<std::string>>& documents,
                            std::size_t min_frequency);

    /// Rebuilds from tokens listed in id order (including the two reserved ones).
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    std::size_t size() const noexcept { return tokens_.size(); }
    std::optional<TokenId> find(std::string_view token) const;
    /// kUnkId for unknown tokens.
    TokenId encode(std::string_view token) const;
    const std::string& decode(TokenId id) const;
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

/// Fixed-length id sequence; positions >= true_length hold the pad id.
struct TokenSequence {
    std::vector<TokenId> ids;
    std::size_t true_length = 0;

    std::size_t length() const noexcept { return ids.size(); }
    friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Keeps the first n tokens, maps unknown tokens to kUnkId and pads the tail.
TokenSequence encode_and_pad(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                             std::size_t n);

/// Sequences with their labels, all of one length.
struct EncodedCorpus {
    std::vector<TokenSequence> sequences;
    std::vector<Sentiment> labels;

    std::size_t size() const noexcept { return sequences.size(); }
    bool empty() const noexcept { return sequences.empty(); }
    std::size_t sequence_length() const noexcept
    {
        return sequences.empty() ? 0 : sequences.front().length();
    }
    EncodedCorpus subset(const std::vector<std::size_t>& indices) const;
};

/// CSV `ids,label`: ids space-separated, label -1/0/1.
std::string encoded_corpus_csv(const EncodedCorpus& corpus);
EncodedCorpus parse_encoded_corpus(std::string_view csv_text);
EncodedCorpus load_encoded_corpus(const std::string& path);

/// One token per line in id order.
std::string vocabulary_text(const Vocabulary& vocab);
Vocabulary parse_vocabulary(std::string_view text);

}  // namespace sentiment
