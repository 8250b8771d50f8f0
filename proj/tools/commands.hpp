#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace sentiment::cli {

struct IngestArgs {
    std::string input;
    std::string out_dir;
};

struct TrainArgs {
    std::string cache_dir;
    std::string out_dir;
    /// Set when --seq-len was given; must agree with the cache.
    bool seq_len_given = false;
};

struct EvaluateArgs {
    std::string model;
    std::string cache;  // encoded corpus CSV
    std::string input;  // raw labelled CSV
    std::string out_dir;
};

struct PredictArgs {
    std::string model;
    std::vector<std::string> texts;  // empty: read lines from stdin
};

enum class HistoryMetric { Loss, Accuracy };

struct HistoryExportArgs {
    std::string history;
    std::string out;  // empty: stdout
    HistoryMetric metric = HistoryMetric::Loss;
};

// Each command writes its files and a short summary to out. Errors
// propagate as sentiment::Error.
void run_ingest(const IngestArgs& args, const RunConfig& config, std::ostream& out);
void run_train(const TrainArgs& args, const RunConfig& config, std::ostream& out, std::ostream& log);
void run_evaluate(const EvaluateArgs& args, const RunConfig& config, std::ostream& out);
void run_predict(const PredictArgs& args, const RunConfig& config, std::istream& in, std::ostream& out);
void run_history_export(const HistoryExportArgs& args, std::ostream& out);

}  // namespace sentiment::cli
