#pragma once

#include <string>

#include "sentiment/corpus.hpp"
#include "sentiment/model.hpp"
#include "sentiment/training.hpp"

namespace sentiment::cli {

/// Every setting a command may read. Defaults here, then the config file,
/// then command-line flags.
struct RunConfig {
    std::string text_column = "text";
    std::string label_column = "label";
    bool keep_duplicates = false;

    std::string stopwords_path;  // empty: bundled English list
    bool drop_hashtag_words = false;
    std::size_t min_frequency = 1;

    ModelConfig model;
    TrainConfig train;
    SplitSpec split;
};

/// INI file with sections [corpus], [preprocess], [model], [train] and
/// [split]. Unknown sections or keys throw InvalidConfig.
RunConfig load_run_config(const std::string& path);

}  // namespace sentiment::cli
