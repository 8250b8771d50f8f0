#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sentiment {

/// Set of lowercase stop words.
class StopWordList {
public:
    StopWordList() = default;
    /// Throws InvalidArgument on an empty or non-lowercase entry.
    explicit StopWordList(const std::vector<std::string>& words);

    /// One word per line; blank lines and lines starting with '#' are skipped.
    static StopWordList parse(std::string_view text);
    static StopWordList load(const std::string& path);
    /// The bundled English list (data/stopwords_en.txt).
    static const StopWordList& english();

    bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

private:
    std::set<std::string, std::less<>> words_;
};

struct PipelineOptions {
    /// Drop "#word" entirely instead of keeping "word".
    bool drop_hashtag_words = false;
};

/// Removes http://, https:// and www. runs up to the next whitespace.
std::string remove_urls(std::string_view text);

/// Strips leading RT markers, @mentions (with a trailing ':'), '#' signs,
/// HTML entities and non-ASCII or control characters.
std::string filter_twitter_artifacts(std::string_view text, const PipelineOptions& options = {});

/// Replaces every ASCII punctuation character with one space.
std::string remove_punctuation(std::string_view text);

/// Lowercases and splits on whitespace runs.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens,
                                           const StopWordList& stops);

std::string to_lower_ascii(std::string_view text);

/// Every cleaning stage except stemming:
/// lowercase, URLs, Twitter artifacts, punctuation, tokenize, stop words.
std::vector<std::string> clean_tokens(std::string_view raw, const StopWordList& stops,
                                      const PipelineOptions& options = {});

/// clean_tokens followed by Porter stemming of each token.
std::vector<std::string> preprocess(std::string_view raw, const StopWordList& stops,
                                    const PipelineOptions& options = {});

}  // namespace sentiment
