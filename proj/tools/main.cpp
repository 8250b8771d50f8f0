// Command-line front end: ingest, train, evaluate, predict, history-export.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O or format
// error, 3 non-finite training loss.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "sentiment/error.hpp"

using namespace sentiment;
using namespace sentiment::cli;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kDiverged = 3 };

/// Flags that override config-file settings when present.
struct Overrides {
    std::optional<std::string> config_path;

    std::optional<std::string> text_column;
    std::optional<std::string> label_column;
    bool keep_duplicates = false;
    std::optional<std::string> stopwords;
    bool drop_hashtag_words = false;
    std::optional<std::size_t> min_freq;
    std::optional<std::size_t> seq_len;

    std::optional<std::string> variant;
    std::optional<std::string> activation;
    std::optional<std::size_t> embed_dim;
    std::optional<std::size_t> window;
    std::optional<std::size_t> filters;
    std::optional<std::size_t> hidden;

    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch_size;
    std::optional<double> lr;
    std::optional<std::string> optimizer;
    std::optional<std::uint64_t> seed;
    bool no_shuffle = false;

    std::optional<double> train_fraction;
    std::optional<double> val_fraction;
    std::optional<std::uint64_t> split_seed;
};

template <typename T>
T parsed_or_throw(const char* what, const std::string& text, std::optional<T> value)
{
    if (!value) {
        throw Error(ErrorCode::InvalidConfig, std::string("unknown ") + what + " '" + text + "'");
    }
    return *value;
}

RunConfig resolve(const Overrides& o)
{
    RunConfig c = o.config_path ? load_run_config(*o.config_path) : RunConfig{};
    if (o.text_column) c.text_column = *o.text_column;
    if (o.label_column) c.label_column = *o.label_column;
    if (o.keep_duplicates) c.keep_duplicates = true;
    if (o.stopwords) c.stopwords_path = *o.stopwords;
    if (o.drop_hashtag_words) c.drop_hashtag_words = true;
    if (o.min_freq) c.min_frequency = *o.min_freq;
    if (o.seq_len) c.model.seq_len = *o.seq_len;

    if (o.variant) c.model.variant = parsed_or_throw("variant", *o.variant, parse_variant(*o.variant));
    if (o.activation)
        c.model.activation = parsed_or_throw("activation", *o.activation, parse_activation(*o.activation));
    if (o.embed_dim) c.model.embed_dim = *o.embed_dim;
    if (o.window) c.model.window = *o.window;
    if (o.filters) c.model.filters = *o.filters;
    if (o.hidden) c.model.hidden = *o.hidden;

    if (o.epochs) c.train.epochs = *o.epochs;
    if (o.batch_size) c.train.batch_size = *o.batch_size;
    if (o.lr) c.train.learning_rate = *o.lr;
    if (o.optimizer)
        c.train.optimizer = parsed_or_throw("optimizer", *o.optimizer, parse_optimizer(*o.optimizer));
    if (o.seed) c.train.seed = *o.seed;
    if (o.no_shuffle) c.train.shuffle = false;

    if (o.train_fraction) c.split.train_fraction = *o.train_fraction;
    if (o.val_fraction) c.split.val_fraction = *o.val_fraction;
    if (o.split_seed) c.split.seed = *o.split_seed;
    return c;
}

void add_config_option(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config_path, "INI settings file; flags take precedence")
        ->check(CLI::ExistingFile);
}

void add_text_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--stopwords", o.stopwords, "Stop-word file, one word per line (default: bundled English list)");
    cmd->add_flag("--drop-hashtag-words", o.drop_hashtag_words, "Drop #word entirely instead of keeping word");
}

void add_column_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--text-column", o.text_column, "Text column name (default: text)");
    cmd->add_option("--label-column", o.label_column, "Label column name (default: label)");
}

int exit_code(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::NonFiniteLoss:
        return kDiverged;
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidArgument:
        return kUsage;
    default:
        return kIo;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"CNN-LSTM sentiment toolkit for short texts"};
    app.require_subcommand(1);
    Overrides o;

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Clean a labelled CSV and write the encoded cache");
    ingest_cmd->add_option("--input", ingest.input, "CSV with text and label (-1, 0, 1) columns")->required();
    ingest_cmd->add_option("--out", ingest.out_dir, "Output directory")->required();
    add_config_option(ingest_cmd, o);
    add_column_options(ingest_cmd, o);
    add_text_options(ingest_cmd, o);
    ingest_cmd->add_flag("--keep-duplicates", o.keep_duplicates, "Keep repeated texts");
    ingest_cmd->add_option("--min-freq", o.min_freq, "Minimum token frequency for the vocabulary (default: 1)");
    ingest_cmd->add_option("--seq-len", o.seq_len, "Padded sequence length n (default: 32)");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a model on an ingested cache");
    train_cmd->add_option("--cache", train_args.cache_dir, "Directory written by ingest")->required();
    train_cmd->add_option("--out", train_args.out_dir, "Output directory")->required();
    add_config_option(train_cmd, o);
    train_cmd->add_option("--variant", o.variant, "cnn-lstm, cnn or lstm (default: cnn-lstm)");
    train_cmd->add_option("--activation", o.activation, "Convolution activation: tanh or sigmoid (default: tanh)");
    train_cmd->add_option("--embed-dim", o.embed_dim, "Word vector size k (default: 64)");
    train_cmd->add_option("--window", o.window, "Convolution window h (default: 3)");
    train_cmd->add_option("--filters", o.filters, "Number of filters m (default: 64)");
    train_cmd->add_option("--hidden", o.hidden, "LSTM state size (default: 64)");
    train_cmd->add_option("--seq-len", o.seq_len, "Must match the cache when given");
    train_cmd->add_option("--epochs", o.epochs, "Epochs; 0 saves the initial model (default: 60)");
    train_cmd->add_option("--batch-size", o.batch_size, "Mini-batch size (default: 32)");
    train_cmd->add_option("--lr", o.lr, "Learning rate (default: 0.001)");
    train_cmd->add_option("--optimizer", o.optimizer, "adam or sgd (default: adam)");
    train_cmd->add_option("--seed", o.seed, "Initialization and shuffle seed (default: 42)");
    train_cmd->add_flag("--no-shuffle", o.no_shuffle, "Keep the training order fixed");
    train_cmd->add_option("--train-fraction", o.train_fraction, "Training share of the split (default: 0.8)");
    train_cmd->add_option("--val-fraction", o.val_fraction, "Validation share of the split (default: 0.1)");
    train_cmd->add_option("--split-seed", o.split_seed, "Split seed (default: 42)");

    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a model and write report.csv and confusion.csv");
    eval_cmd->add_option("--model", eval_args.model, "Model file")->required();
    auto* cache_opt = eval_cmd->add_option("--cache", eval_args.cache, "Encoded corpus CSV, e.g. test_cache.csv");
    auto* input_opt = eval_cmd->add_option("--input", eval_args.input, "Raw labelled CSV");
    cache_opt->excludes(input_opt);
    eval_cmd->add_option("--out", eval_args.out_dir, "Output directory (default: .)");
    add_config_option(eval_cmd, o);
    add_column_options(eval_cmd, o);
    add_text_options(eval_cmd, o);
    eval_args.out_dir = ".";

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Print label,p_neg,p_neu,p_pos for each text");
    predict_cmd->add_option("--model", predict_args.model, "Model file")->required();
    predict_cmd->add_option("texts", predict_args.texts, "Texts to classify (default: one per stdin line)");
    add_config_option(predict_cmd, o);
    add_text_options(predict_cmd, o);

    HistoryExportArgs history_args;
    std::string metric = "loss";
    auto* history_cmd = app.add_subcommand("history-export", "Write plot-ready train/val curves");
    history_cmd->add_option("--history", history_args.history, "history.csv written by train")->required();
    history_cmd->add_option("--metric", metric, "loss or accuracy (default: loss)")
        ->check(CLI::IsMember({"loss", "accuracy"}));
    history_cmd->add_option("--out", history_args.out, "Output CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*eval_cmd && eval_args.cache.empty() && eval_args.input.empty()) {
            std::cerr << "evaluate: one of --cache or --input is required\n";
            return kUsage;
        }
        const RunConfig config = resolve(o);
        if (*ingest_cmd) {
            run_ingest(ingest, config, std::cout);
        } else if (*train_cmd) {
            train_args.seq_len_given = o.seq_len.has_value();
            run_train(train_args, config, std::cout, std::cerr);
        } else if (*eval_cmd) {
            run_evaluate(eval_args, config, std::cout);
        } else if (*predict_cmd) {
            run_predict(predict_args, config, std::cin, std::cout);
        } else if (*history_cmd) {
            history_args.metric = metric == "accuracy" ? HistoryMetric::Accuracy : HistoryMetric::Loss;
            run_history_export(history_args, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kOk;
}
