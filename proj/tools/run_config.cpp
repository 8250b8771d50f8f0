#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <map>

#include "sentiment/error.hpp"

namespace sentiment::cli {
namespace {

namespace pt = boost::property_tree;

using Setter = std::function<void(RunConfig&, const std::string&)>;

template <typename T>
T number(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        T value;
        if constexpr (std::is_floating_point_v<T>) {
            value = static_cast<T>(std::stod(text, &used));
        } else {
            if (!text.empty() && text.front() == '-') {
                throw std::invalid_argument("negative");
            }
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return value;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidConfig, key + ": '" + text + "' is not a valid number");
    }
}

bool boolean(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw Error(ErrorCode::InvalidConfig, key + ": '" + text + "' is not a boolean");
}

template <typename T>
T choice(const std::string& key, const std::string& text, std::optional<T> parsed)
{
    if (!parsed) {
        throw Error(ErrorCode::InvalidConfig, key + ": unknown value '" + text + "'");
    }
    return *parsed;
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"corpus.text_column", [](RunConfig& c, const std::string& v) { c.text_column = v; }},
        {"corpus.label_column", [](RunConfig& c, const std::string& v) { c.label_column = v; }},
        {"corpus.keep_duplicates",
         [](RunConfig& c, const std::string& v) { c.keep_duplicates = boolean("corpus.keep_duplicates", v); }},

        {"preprocess.stopwords", [](RunConfig& c, const std::string& v) { c.stopwords_path = v; }},
        {"preprocess.drop_hashtag_words",
         [](RunConfig& c, const std::string& v) {
             c.drop_hashtag_words = boolean("preprocess.drop_hashtag_words", v);
         }},
        {"preprocess.min_freq",
         [](RunConfig& c, const std::string& v) { c.min_frequency = number<std::size_t>("preprocess.min_freq", v); }},
        {"preprocess.seq_len",
         [](RunConfig& c, const std::string& v) { c.model.seq_len = number<std::size_t>("preprocess.seq_len", v); }},

        {"model.variant",
         [](RunConfig& c, const std::string& v) { c.model.variant = choice("model.variant", v, parse_variant(v)); }},
        {"model.activation",
         [](RunConfig& c, const std::string& v) {
             c.model.activation = choice("model.activation", v, parse_activation(v));
         }},
        {"model.embed_dim",
         [](RunConfig& c, const std::string& v) { c.model.embed_dim = number<std::size_t>("model.embed_dim", v); }},
        {"model.window",
         [](RunConfig& c, const std::string& v) { c.model.window = number<std::size_t>("model.window", v); }},
        {"model.filters",
         [](RunConfig& c, const std::string& v) { c.model.filters = number<std::size_t>("model.filters", v); }},
        {"model.hidden",
         [](RunConfig& c, const std::string& v) { c.model.hidden = number<std::size_t>("model.hidden", v); }},

        {"train.epochs",
         [](RunConfig& c, const std::string& v) { c.train.epochs = number<std::size_t>("train.epochs", v); }},
        {"train.batch_size",
         [](RunConfig& c, const std::string& v) { c.train.batch_size = number<std::size_t>("train.batch_size", v); }},
        {"train.lr",
         [](RunConfig& c, const std::string& v) { c.train.learning_rate = number<double>("train.lr", v); }},
        {"train.optimizer",
         [](RunConfig& c, const std::string& v) {
             c.train.optimizer = choice("train.optimizer", v, parse_optimizer(v));
         }},
        {"train.seed",
         [](RunConfig& c, const std::string& v) { c.train.seed = number<std::uint64_t>("train.seed", v); }},
        {"train.shuffle",
         [](RunConfig& c, const std::string& v) { c.train.shuffle = boolean("train.shuffle", v); }},
        {"train.beta1",
         [](RunConfig& c, const std::string& v) { c.train.adam.beta1 = number<double>("train.beta1", v); }},
        {"train.beta2",
         [](RunConfig& c, const std::string& v) { c.train.adam.beta2 = number<double>("train.beta2", v); }},
        {"train.epsilon",
         [](RunConfig& c, const std::string& v) { c.train.adam.epsilon = number<double>("train.epsilon", v); }},

        {"split.train_fraction",
         [](RunConfig& c, const std::string& v) { c.split.train_fraction = number<double>("split.train_fraction", v); }},
        {"split.val_fraction",
         [](RunConfig& c, const std::string& v) { c.split.val_fraction = number<double>("split.val_fraction", v); }},
        {"split.seed",
         [](RunConfig& c, const std::string& v) { c.split.seed = number<std::uint64_t>("split.seed", v); }},
    };
    return table;
}

}  // namespace

RunConfig load_run_config(const std::string& path)
{
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::Io, e.what());
    }

    RunConfig config;
    for (const auto& [section, keys] : tree) {
        if (!keys.data().empty()) {
            throw Error(ErrorCode::InvalidConfig, path + ": '" + section + "' is outside any section");
        }
        for (const auto& [key, value] : keys) {
            const auto name = section + "." + key;
            const auto it = setters().find(name);
            if (it == setters().end()) {
                throw Error(ErrorCode::InvalidConfig, path + ": unknown setting '" + name + "'");
            }
            it->second(config, value.get_value<std::string>());
        }
    }
    return config;
}

}  // namespace sentiment::cli
