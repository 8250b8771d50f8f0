#include "sentiment/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"

namespace sentiment {

Vocabulary::Vocabulary()
    : tokens_{std::string(kPadToken), std::string(kUnkToken)},
      ids_{{std::string(kPadToken), kPadId}, {std::string(kUnkToken), kUnkId}}
{}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& documents,
                             std::size_t min_frequency)
{
    if (min_frequency < 1) {
        throw Error(ErrorCode::InvalidArgument, "min_frequency must be at least 1");
    }
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto& doc : documents) {
        for (const auto& token : doc) {
            ++counts[token];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [token, count] : counts) {
        if (count >= min_frequency && token != kPadToken && token != kUnkToken) {
            kept.emplace_back(token, count);
        }
    }
    // counts is already lexicographic, so a stable sort by frequency breaks ties by token.
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<std::string> tokens{std::string(kPadToken), std::string(kUnkToken)};
    tokens.reserve(kept.size() + 2);
    for (auto& entry : kept) {
        tokens.push_back(std::move(entry.first));
    }
    return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens)
{
    if (tokens.size() < 2 || tokens[kPadId] != kPadToken || tokens[kUnkId] != kUnkToken) {
        throw Error(ErrorCode::InvalidArgument, "vocabulary must start with <pad> and <unk>");
    }
    Vocabulary v;
    v.tokens_ = std::move(tokens);
    v.ids_.clear();
    v.ids_.reserve(v.tokens_.size());
    for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
        if (v.tokens_[i].empty()) {
            throw Error(ErrorCode::InvalidArgument, "empty token at id " + std::to_string(i));
        }
        if (!v.ids_.emplace(v.tokens_[i], static_cast<TokenId>(i)).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate token '" + v.tokens_[i] + "'");
        }
    }
    return v;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const
{
    auto it = ids_.find(std::string(token));
    if (it == ids_.end() || it->second < 2) {
        return std::nullopt;
    }
    return it->second;
}

TokenId Vocabulary::encode(std::string_view token) const
{
    return find(token).value_or(kUnkId);
}

const std::string& Vocabulary::decode(TokenId id) const
{
    if (id >= tokens_.size()) {
        throw Error(ErrorCode::IdOutOfRange, "token id " + std::to_string(id));
    }
    return tokens_[id];
}

TokenSequence encode_and_pad(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                             std::size_t n)
{
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "sequence length must be at least 1");
    }
    TokenSequence seq;
    seq.ids.assign(n, Vocabulary::kPadId);
    seq.true_length = std::min(tokens.size(), n);
    for (std::size_t i = 0; i < seq.true_length; ++i) {
        seq.ids[i] = vocab.encode(tokens[i]);
    }
    return seq;
}

EncodedCorpus EncodedCorpus::subset(const std::vector<std::size_t>& indices) const
{
    EncodedCorpus out;
    out.sequences.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (auto i : indices) {
        out.sequences.push_back(sequences.at(i));
        out.labels.push_back(labels.at(i));
    }
    return out;
}

std::string encoded_corpus_csv(const EncodedCorpus& corpus)
{
    std::ostringstream out;
    out << "ids,label\n";
    for (std::size_t r = 0; r < corpus.size(); ++r) {
        const auto& ids = corpus.sequences[r].ids;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            out << (i ? " " : "") << ids[i];
        }
        out << ',' << polarity(corpus.labels[r]) << '\n';
    }
    return out.str();
}

EncodedCorpus parse_encoded_corpus(std::string_view csv_text)
{
    auto rows = csv::parse(csv_text);
    if (rows.empty() || rows.front() != csv::Row{"ids", "label"}) {
        throw Error(ErrorCode::Io, "encoded corpus must start with header 'ids,label'");
    }
    EncodedCorpus corpus;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 2) {
            throw Error(ErrorCode::Io, "encoded corpus row " + std::to_string(r) + " has "
                                           + std::to_string(row.size()) + " fields");
        }
        auto label = parse_polarity(row[1]);
        if (!label) {
            throw UnparsableLabel(r, row[1]);
        }
        TokenSequence seq;
        const char* p = row[0].data();
        const char* end = p + row[0].size();
        while (p < end) {
            if (*p == ' ') {
                ++p;
                continue;
            }
            TokenId id = 0;
            auto [next, ec] = std::from_chars(p, end, id);
            if (ec != std::errc{}) {
                throw Error(ErrorCode::Io, "bad token id in encoded corpus row " + std::to_string(r));
            }
            seq.ids.push_back(id);
            p = next;
        }
        auto last = std::find_if(seq.ids.rbegin(), seq.ids.rend(),
                                 [](TokenId id) { return id != Vocabulary::kPadId; });
        seq.true_length = static_cast<std::size_t>(seq.ids.rend() - last);
        if (!corpus.empty() && seq.length() != corpus.sequence_length()) {
            throw Error(ErrorCode::Io, "encoded corpus row " + std::to_string(r)
                                           + " has a different sequence length");
        }
        if (seq.ids.empty()) {
            throw Error(ErrorCode::Io, "encoded corpus row " + std::to_string(r) + " is empty");
        }
        corpus.sequences.push_back(std::move(seq));
        corpus.labels.push_back(*label);
    }
    return corpus;
}

EncodedCorpus load_encoded_corpus(const std::string& path)
{
    return parse_encoded_corpus(csv::read_file(path));
}

std::string vocabulary_text(const Vocabulary& vocab)
{
    std::string out;
    for (const auto& t : vocab.tokens()) {
        out += t;
        out += '\n';
    }
    return out;
}

Vocabulary parse_vocabulary(std::string_view text)
{
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        tokens.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return Vocabulary::from_tokens(std::move(tokens));
}

}  // namespace sentiment
