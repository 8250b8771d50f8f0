#include "sentiment/text_pipeline.hpp"

#include <algorithm>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"
#include "sentiment/porter_stemmer.hpp"

namespace sentiment {

// Defined in the generated default_stopwords.cpp.
extern const char* const kDefaultStopWordsText;

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_ascii_punct(char c)
{
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`')
           || (c >= '{' && c <= '~');
}

bool starts_with_icase(std::string_view text, std::size_t pos, std::string_view prefix)
{
    if (text.size() - pos < prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = text[pos + i];
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
        if (c != prefix[i]) {
            return false;
        }
    }
    return true;
}

std::size_t skip_word(std::string_view text, std::size_t pos)
{
    while (pos < text.size() && is_word_char(text[pos])) {
        ++pos;
    }
    return pos;
}

// Length of the UTF-8 sequence introduced by lead byte c (1 for stray bytes).
std::size_t utf8_length(unsigned char c)
{
    if (c >= 0xF0 && c < 0xF8) {
        return 4;
    }
    if (c >= 0xE0) {
        return c < 0xF0 ? 3 : 1;
    }
    if (c >= 0xC0) {
        return 2;
    }
    return 1;
}

}  // namespace

StopWordList::StopWordList(const std::vector<std::string>& words)
{
    for (const auto& w : words) {
        if (w.empty()) {
            throw Error(ErrorCode::InvalidArgument, "empty stop word");
        }
        if (std::any_of(w.begin(), w.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
            throw Error(ErrorCode::InvalidArgument, "stop word '" + w + "' is not lowercase");
        }
        words_.insert(w);
    }
}

StopWordList StopWordList::parse(std::string_view text)
{
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        while (!line.empty() && is_space(line.back())) {
            line.remove_suffix(1);
        }
        while (!line.empty() && is_space(line.front())) {
            line.remove_prefix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        words.emplace_back(line);
    }
    return StopWordList(words);
}

StopWordList StopWordList::load(const std::string& path)
{
    return parse(csv::read_file(path));
}

const StopWordList& StopWordList::english()
{
    static const StopWordList list = parse(kDefaultStopWordsText);
    return list;
}

std::string remove_urls(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (starts_with_icase(text, i, "http://") || starts_with_icase(text, i, "https://")
            || starts_with_icase(text, i, "www.")) {
            while (i < text.size() && !is_space(text[i])) {
                ++i;
            }
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

std::string filter_twitter_artifacts(std::string_view text, const PipelineOptions& options)
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;

    // Leading retweet markers ("RT", "RT RT", ...), with the whitespace after them.
    for (;;) {
        std::size_t p = i;
        while (p < text.size() && is_space(text[p])) {
            ++p;
        }
        if (!starts_with_icase(text, p, "rt") || (p + 2 < text.size() && is_word_char(text[p + 2]))) {
            break;
        }
        out.append(text.substr(i, p - i));
        i = p + 2;
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
    }

    while (i < text.size()) {
        const char c = text[i];
        const auto byte = static_cast<unsigned char>(c);
        if (c == '@' && i + 1 < text.size() && is_word_char(text[i + 1])) {
            i = skip_word(text, i + 1);
            if (i < text.size() && text[i] == ':') {
                ++i;
            }
        } else if (c == '#') {
            i = options.drop_hashtag_words ? skip_word(text, i + 1) : i + 1;
        } else if (c == '&' && i + 1 < text.size() && is_word_char(text[i + 1])) {
            // HTML entity such as &amp; from scraped tweets.
            auto end = skip_word(text, i + 1);
            if (end < text.size() && text[end] == ';') {
                out.push_back(' ');
                i = end + 1;
            } else {
                out.push_back(c);
                ++i;
            }
        } else if (byte >= 0x80) {
            out.push_back(' ');
            i += std::min(utf8_length(byte), text.size() - i);
        } else if ((byte < 0x20 && !is_space(c)) || byte == 0x7F) {
            out.push_back(' ');
            ++i;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

std::string remove_punctuation(std::string_view text)
{
    std::string out(text);
    std::replace_if(out.begin(), out.end(), is_ascii_punct, ' ');
    return out;
}

std::string to_lower_ascii(std::string_view text)
{
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        const auto start = i;
        while (i < text.size() && !is_space(text[i])) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(to_lower_ascii(text.substr(start, i - start)));
        }
    }
    return tokens;
}

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens,
                                           const StopWordList& stops)
{
    std::erase_if(tokens, [&](const std::string& t) { return stops.contains(t); });
    return tokens;
}

std::vector<std::string> clean_tokens(std::string_view raw, const StopWordList& stops,
                                      const PipelineOptions& options)
{
    auto text = to_lower_ascii(raw);
    text = remove_urls(text);
    text = filter_twitter_artifacts(text, options);
    text = remove_punctuation(text);
    return remove_stop_words(tokenize(text), stops);
}

std::vector<std::string> preprocess(std::string_view raw, const StopWordList& stops,
                                    const PipelineOptions& options)
{
    auto tokens = clean_tokens(raw, stops, options);
    for (auto& t : tokens) {
        t = porter_stem(t);
    }
    return tokens;
}

}  // namespace sentiment
