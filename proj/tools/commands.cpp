#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"
#include "sentiment/metrics.hpp"
#include "sentiment/serialization.hpp"
#include "sentiment/text_pipeline.hpp"
#include "sentiment/vocabulary.hpp"

namespace sentiment::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCorpusFile = "corpus.csv";
constexpr const char* kVocabFile = "vocab.txt";
constexpr const char* kHistogramFile = "histogram.csv";
constexpr const char* kModelFile = "model.bin";
constexpr const char* kHistoryFile = "history.csv";
constexpr const char* kTrainCacheFile = "train_cache.csv";
constexpr const char* kValCacheFile = "val_cache.csv";
constexpr const char* kTestCacheFile = "test_cache.csv";
constexpr const char* kReportFile = "report.csv";
constexpr const char* kConfusionFile = "confusion.csv";

void make_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create directory '" + dir + "': " + ec.message());
    }
}

void write_file(const fs::path& path, std::string_view content)
{
    std::ofstream file(path, std::ios::binary);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.close();
    if (!file) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
}

StopWordList stop_words(const RunConfig& config)
{
    return config.stopwords_path.empty() ? StopWordList::english()
                                         : StopWordList::load(config.stopwords_path);
}

std::string format_accuracy(double value)
{
    return std::isnan(value) ? std::string("n/a") : format_number(value);
}

EncodedCorpus encode_labeled(const LabeledCorpus& corpus, const Vocabulary& vocab, std::size_t n,
                             const RunConfig& config)
{
    const auto stops = stop_words(config);
    const PipelineOptions options{config.drop_hashtag_words};
    EncodedCorpus out;
    for (const auto& ex : corpus.examples) {
        out.sequences.push_back(encode_and_pad(preprocess(ex.text, stops, options), vocab, n));
        out.labels.push_back(ex.label);
    }
    return out;
}

}  // namespace

void run_ingest(const IngestArgs& args, const RunConfig& config, std::ostream& out)
{
    if (config.min_frequency < 1) {
        throw Error(ErrorCode::InvalidConfig, "min frequency must be at least 1");
    }
    if (config.model.seq_len < 1) {
        throw Error(ErrorCode::InvalidConfig, "sequence length must be at least 1");
    }
    const auto loaded = load_corpus(args.input, config.text_column, config.label_column);
    const auto corpus = config.keep_duplicates ? loaded : remove_duplicates(loaded);

    const auto stops = stop_words(config);
    const PipelineOptions options{config.drop_hashtag_words};
    std::vector<std::vector<std::string>> documents;
    documents.reserve(corpus.size());
    for (const auto& ex : corpus.examples) {
        documents.push_back(preprocess(ex.text, stops, options));
    }
    const auto vocab = Vocabulary::build(documents, config.min_frequency);

    EncodedCorpus encoded;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        encoded.sequences.push_back(encode_and_pad(documents[i], vocab, config.model.seq_len));
        encoded.labels.push_back(corpus.examples[i].label);
    }

    make_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    write_file(dir / kHistogramFile, histogram_csv(class_histogram(corpus)));
    write_file(dir / kCorpusFile, encoded_corpus_csv(encoded));
    write_file(dir / kVocabFile, vocabulary_text(vocab));

    out << "examples: " << corpus.size() << "\n"
        << "duplicates removed: " << loaded.size() - corpus.size() << "\n"
        << "blank rows skipped: " << loaded.skipped_blank << "\n"
        << "vocabulary: " << vocab.size() << "\n";
}

void run_train(const TrainArgs& args, const RunConfig& config, std::ostream& out, std::ostream& log)
{
    const fs::path cache(args.cache_dir);
    const auto vocab = parse_vocabulary(csv::read_file((cache / kVocabFile).string()));
    const auto corpus = load_encoded_corpus((cache / kCorpusFile).string());
    if (corpus.empty()) {
        throw Error(ErrorCode::EmptyFile, "cached corpus has no examples");
    }

    ModelConfig model_config = config.model;
    if (args.seq_len_given && model_config.seq_len != corpus.sequence_length()) {
        throw Error(ErrorCode::InvalidConfig,
                    "sequence length " + std::to_string(model_config.seq_len)
                        + " does not match the cache (" + std::to_string(corpus.sequence_length()) + ")");
    }
    model_config.seq_len = corpus.sequence_length();
    model_config.validate();
    config.split.validate();
    if (config.train.epochs > 0) {
        config.train.validate();
    }

    const auto parts = stratified_split_indices(corpus.labels, config.split);
    const auto train_set = corpus.subset(parts.train);
    const auto val_set = corpus.subset(parts.val);
    const auto test_set = corpus.subset(parts.test);

    auto model = build_model(model_config, vocab, Rng(config.train.seed));
    EpochHistory history;
    if (config.train.epochs > 0) {
        history = train(model, train_set, val_set, config.train, [&](const EpochRecord& r) {
            log << "epoch " << r.epoch << "/" << config.train.epochs << " train_loss "
                << format_number(r.train_loss) << " train_acc " << format_number(r.train_accuracy)
                << " val_loss " << format_accuracy(r.val_loss) << " val_acc "
                << format_accuracy(r.val_accuracy) << "\n";
        });
    }

    make_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    save_model(model, (dir / kModelFile).string());
    write_file(dir / kHistoryFile, history.csv());
    write_file(dir / kTrainCacheFile, encoded_corpus_csv(train_set));
    write_file(dir / kValCacheFile, encoded_corpus_csv(val_set));
    write_file(dir / kTestCacheFile, encoded_corpus_csv(test_set));

    out << "split: " << train_set.size() << " train, " << val_set.size() << " val, "
        << test_set.size() << " test\n";
    const double val_accuracy = val_set.empty() ? std::nan("") : evaluate(model, val_set).accuracy;
    out << "final val accuracy: " << format_accuracy(val_accuracy) << "\n";
}

void run_evaluate(const EvaluateArgs& args, const RunConfig& config, std::ostream& out)
{
    const auto model = load_model(args.model);
    const std::size_t n = model.config().seq_len;
    const EncodedCorpus data =
        args.cache.empty()
            ? encode_labeled(load_corpus(args.input, config.text_column, config.label_column),
                             model.vocabulary(), n, config)
            : load_encoded_corpus(args.cache);
    if (data.empty()) {
        throw Error(ErrorCode::EmptyFile, "nothing to evaluate");
    }
    if (data.sequence_length() != n) {
        throw Error(ErrorCode::ShapeMismatch, "cached sequences have length "
                                                  + std::to_string(data.sequence_length())
                                                  + ", the model expects " + std::to_string(n));
    }

    const auto eval = evaluate(model, data);
    const auto cm = confusion(std::span<const Sentiment>(eval.predictions),
                              std::span<const Sentiment>(data.labels));
    const auto report = macro_report(cm);

    make_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    write_file(dir / kReportFile, report_csv(report));
    write_file(dir / kConfusionFile, confusion_csv(cm));

    out << "examples: " << data.size() << "\n"
        << "loss: " << format_number(eval.loss) << "\n"
        << "accuracy: " << format_number(report.accuracy) << "\n"
        << "macro f1: " << format_number(report.macro.f1) << "\n";
}

void run_predict(const PredictArgs& args, const RunConfig& config, std::istream& in, std::ostream& out)
{
    const auto model = load_model(args.model);
    const auto stops = stop_words(config);
    const PipelineOptions options{config.drop_hashtag_words};

    const auto emit = [&](const std::string& text) {
        const auto seq = encode_and_pad(preprocess(text, stops, options), model.vocabulary(),
                                        model.config().seq_len);
        const auto p = model.forward(seq);
        out << polarity(class_from_index(argmax(p))) << "," << format_number(p[0]) << ","
            << format_number(p[1]) << "," << format_number(p[2]) << "\n";
    };

    if (!args.texts.empty()) {
        for (const auto& text : args.texts) {
            emit(text);
        }
        return;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        emit(line);
    }
}

void run_history_export(const HistoryExportArgs& args, std::ostream& out)
{
    const auto history = EpochHistory::parse_csv(csv::read_file(args.history));
    const bool loss = args.metric == HistoryMetric::Loss;

    std::string text = loss ? "epoch,train_loss,val_loss\n" : "epoch,train_acc,val_acc\n";
    for (const auto& r : history.records) {
        const double train_value = loss ? r.train_loss : r.train_accuracy;
        const double val_value = loss ? r.val_loss : r.val_accuracy;
        text += std::to_string(r.epoch) + "," + format_number(train_value) + ","
                + (std::isnan(val_value) ? std::string() : format_number(val_value)) + "\n";
    }

    if (args.out.empty()) {
        out << text;
    } else {
        write_file(args.out, text);
    }
}

}  // namespace sentiment::cli
