// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"
#include "sentiment/metrics.hpp"
#include "sentiment/porter_stemmer.hpp"
#include "sentiment/serialization.hpp"
#include "sentiment/training.hpp"
#include "support/cleaning_cases.hpp"
#include "support/layer_gradients.hpp"
#include "support/porter_reference.hpp"
#include "support/toy_corpus.hpp"

namespace fs = std::filesystem;
using namespace sentiment;
using namespace sentiment::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int number;
    std::string name;
    double limit_seconds;
    /// CPU time for in-process work; wall time when subprocesses do the work.
    bool wall_clock;
    std::function<Outcome()> check;
};

std::string fmt(double v, int precision = 3)
{
    std::ostringstream out;
    out << std::setprecision(precision) << v;
    return out.str();
}

// 1. Gradient correctness.
Outcome gradients()
{
    constexpr double kTolerance = 1e-4;
    double worst = 0.0;
    std::string worst_name;
    std::size_t tensors = 0;
    const auto take = [&](const std::vector<GradientReport>& reports, const std::string& prefix) {
        for (const auto& r : reports) {
            ++tensors;
            const double e = std::isnan(r.max_error) ? std::numeric_limits<double>::infinity() : r.max_error;
            if (e > worst || worst_name.empty()) {
                worst = e;
                worst_name = prefix + r.tensor;
            }
        }
    };
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        take(check_embedding_gradients(seed), "");
        take(check_conv_gradients(seed, Activation::Tanh), "tanh ");
        take(check_conv_gradients(seed, Activation::Sigmoid), "sigmoid ");
        take(check_lstm_gradients(seed), "");
        take(check_dense_gradients(seed), "");
        take(check_cross_entropy_gradient(seed), "");
        take(check_model_gradients(Variant::CnnLstm, seed), "cnn-lstm ");
    }
    return {worst <= kTolerance, std::to_string(tensors) + " tensors, max rel error " + fmt(worst) + " at "
                                     + worst_name};
}

// 2. Convolution shape law.
Outcome shape_law()
{
    constexpr std::size_t m = 3, k = 2;
    Rng rng(5);
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 32; ++n) {
        for (std::size_t h = 1; h <= n; ++h) {
            ConvLayer conv(m, h, k, Activation::Tanh, rng);
            const Matrix out = conv.forward(random_matrix(rng, n, k));
            if (out.rows() != n - h + 1 || out.cols() != m || out.size() != m * (n - h + 1)
                || ConvLayer::output_length(n, h) != n - h + 1) {
                return {false, "n=" + std::to_string(n) + " h=" + std::to_string(h) + " gave "
                                   + std::to_string(out.rows()) + " rows"};
            }
            ++cases;
        }
    }
    return {true, std::to_string(cases) + " (n, h) pairs"};
}

/// Thrown from the epoch callback once the target accuracy is reached.
struct TargetReached {
    std::size_t epoch;
};

// 3. Overfit capability with default settings.
Outcome overfit()
{
    const auto toy = make_toy_corpus(10);
    const auto vocab = Vocabulary::build(toy.documents, 1);
    bool pass = true;
    std::string detail;
    for (auto [variant, target] : {std::pair{Variant::CnnLstm, 0.95}, std::pair{Variant::CnnOnly, 0.90},
                                   std::pair{Variant::LstmOnly, 0.90}}) {
        ModelConfig cfg;
        cfg.variant = variant;
        const auto data = encode_corpus(toy, vocab, cfg.seq_len);
        auto model = build_model(cfg, vocab, Rng(42));
        TrainConfig tc;
        tc.epochs = 300;
        double best = 0.0;
        std::size_t reached = 0;
        try {
            train(model, data, EncodedCorpus{}, tc, [&](const EpochRecord& r) {
                best = std::max(best, r.train_accuracy);
                if (r.train_accuracy >= target) {
                    throw TargetReached{r.epoch};
                }
            });
        } catch (const TargetReached& t) {
            reached = t.epoch;
        }
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += std::string(to_string(variant)) + " ";
        if (reached > 0) {
            detail += ">= " + fmt(target, 2) + " at epoch " + std::to_string(reached);
        } else {
            pass = false;
            detail += "best " + fmt(best) + " after 300 epochs";
        }
    }
    return {pass, detail};
}

// 4. Metric fidelity.
Outcome metric_fidelity()
{
    double worst = 0.0;
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        ConfusionMatrix3::Counts counts{};
        for (auto& row : counts) {
            for (auto& cell : row) {
                cell = rng.uniform_index(40);
            }
        }
        const ConfusionMatrix3 cm(counts);
        for (std::size_t k = 0; k < kNumClasses; ++k) {
            // One-vs-rest counts read straight off the table.
            double tp = counts[k][k], fp = 0, fn = 0, total = 0;
            for (std::size_t p = 0; p < kNumClasses; ++p) {
                for (std::size_t a = 0; a < kNumClasses; ++a) {
                    total += counts[p][a];
                    fp += (p == k && a != k) ? counts[p][a] : 0;
                    fn += (p != k && a == k) ? counts[p][a] : 0;
                }
            }
            const double tn = total - tp - fp - fn;
            const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
            const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
            const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
            const double acc = total > 0 ? (tp + tn) / total : 0.0;
            const double fpr = fp + tn > 0 ? fp / (fp + tn) : 0.0;
            const double area = (r - fpr + 1) / 2;
            const double specificity = fp + tn > 0 ? tn / (tn + fp) : 1.0;

            const auto b = one_vs_rest(cm, class_from_index(k));
            for (auto diff : {precision(b) - p, recall(b) - r, f1(b) - f, accuracy(b) - acc, auc(b) - area,
                              auc(b) - (r + specificity) / 2}) {
                worst = std::max(worst, std::abs(diff));
            }
        }
    }

    const BinaryCounts worked{5, 2, 3, 10};
    const double expected[] = {0.7143, 0.625, 0.6667, 0.75, 0.7292};
    const double got[] = {precision(worked), recall(worked), f1(worked), accuracy(worked), auc(worked)};
    double worked_error = 0.0;
    for (int i = 0; i < 5; ++i) {
        worked_error = std::max(worked_error, std::abs(got[i] - expected[i]));
    }
    return {worst <= 1e-12 && worked_error <= 5e-5,
            "100 matrices max diff " + fmt(worst) + ", worked example max diff " + fmt(worked_error)};
}

// 5. Preprocessing fidelity.
Outcome preprocessing()
{
    std::size_t stem_ok = 0, stem_total = 0;
    for (const auto& [word, stem] : kPorterReference) {
        ++stem_total;
        stem_ok += porter_stem(word) == stem;
    }
    std::size_t clean_ok = 0, clean_total = 0;
    for (const auto& c : kCleaningCases) {
        ++clean_total;
        clean_ok += apply_stage(c.stage, c.input) == c.expected;
    }

    const auto corpus = load_corpus((fs::path(SENTIMENT_TEST_DATA) / "toy.csv").string());
    const auto render = [&] {
        std::string out;
        for (const auto& ex : corpus.examples) {
            for (const auto& token : preprocess(ex.text, StopWordList::english())) {
                out += token + ' ';
            }
            out += '\n';
        }
        return out;
    };
    const bool deterministic = render() == render();

    return {stem_total >= 50 && stem_ok == stem_total && clean_total >= 30 && clean_ok == clean_total
                && deterministic,
            "stems " + std::to_string(stem_ok) + "/" + std::to_string(stem_total) + ", cleaning "
                + std::to_string(clean_ok) + "/" + std::to_string(clean_total) + ", repeat "
                + (deterministic ? "identical" : "differs")};
}

// 6. Serialization.
Outcome serialization()
{
    ModelConfig cfg;
    const auto vocab = small_vocabulary(40);
    const auto model = build_model(cfg, vocab, Rng(6));
    const auto path = fs::temp_directory_path() / ("acceptance-model-" + std::to_string(::getpid()) + ".bin");
    save_model(model, path.string());
    const auto loaded = load_model(path.string());
    const auto bytes = csv::read_file(path.string());
    fs::remove(path);

    Rng rng(7);
    std::size_t equal = 0;
    for (int i = 0; i < 100; ++i) {
        const auto seq = random_sequence(rng, cfg.seq_len, vocab.size());
        const auto a = model.forward(seq), b = loaded.forward(seq);
        equal += std::memcmp(a.data(), b.data(), sizeof a) == 0;
    }

    std::size_t rejected = 0;
    std::vector<std::string> damaged;
    damaged.push_back(bytes.substr(0, bytes.size() - 1));
    damaged.push_back(bytes.substr(0, 20));
    damaged.push_back("");
    for (std::size_t offset : {std::size_t{0}, std::size_t{8}, bytes.size() / 3, bytes.size() - 2}) {
        auto copy = bytes;
        copy[offset] ^= 0x04;
        damaged.push_back(copy);
    }
    for (const auto& d : damaged) {
        try {
            deserialize_model(d);
        } catch (const Error& e) {
            rejected += e.code() == ErrorCode::CorruptFile || e.code() == ErrorCode::FormatVersionMismatch;
        }
    }
    return {equal == 100 && rejected == damaged.size(),
            std::to_string(equal) + "/100 bitwise-equal predictions, " + std::to_string(rejected) + "/"
                + std::to_string(damaged.size()) + " damaged files rejected"};
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(SENTIMENT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 7. End-to-end determinism through the CLI.
Outcome cli_determinism()
{
    const auto root = fs::temp_directory_path() / ("acceptance-cli-" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto cache = (root / "cache").string();
    const auto a = root / "a", b = root / "b";
    const auto input = (fs::path(SENTIMENT_TEST_DATA) / "toy.csv").string();

    Outcome result;
    if (run_cli("ingest --input " + input + " --out " + cache) != 0
        || run_cli("train --cache " + cache + " --out " + a.string() + " --seed 42") != 0
        || run_cli("train --cache " + cache + " --out " + b.string() + " --seed 42") != 0) {
        result = {false, "a CLI command failed"};
    } else {
        const bool history = csv::read_file((a / "history.csv").string()) == csv::read_file((b / "history.csv").string());
        const bool model = csv::read_file((a / "model.bin").string()) == csv::read_file((b / "model.bin").string());
        const auto rows = csv::parse(csv::read_file((a / "history.csv").string())).size() - 1;
        result = {history && model, "history " + std::string(history ? "identical" : "differs") + " ("
                                        + std::to_string(rows) + " epochs), model "
                                        + (model ? "identical" : "differs")};
    }
    fs::remove_all(root);
    return result;
}

// 8. Loss sanity.
Outcome loss_sanity()
{
    double worst = 0.0;
    Rng rng(8);
    const auto vocab = small_vocabulary(30);
    for (auto variant : {Variant::CnnLstm, Variant::CnnOnly, Variant::LstmOnly}) {
        ModelConfig cfg;
        cfg.variant = variant;
        auto model = build_model(cfg, vocab, Rng(9));
        for (auto* p : model.parameters()) {
            p->fill(0.0);
        }
        for (std::size_t per_class : {1, 5, 17}) {
            EncodedCorpus data;
            for (std::size_t i = 0; i < 3 * per_class; ++i) {
                data.sequences.push_back(random_sequence(rng, cfg.seq_len, vocab.size()));
                data.labels.push_back(class_from_index(i % 3));
            }
            worst = std::max(worst, std::abs(evaluate(model, data).loss - std::log(3.0)));
        }
    }

    const auto toy = make_toy_corpus(10);
    const auto toy_vocab = Vocabulary::build(toy.documents, 1);
    ModelConfig cfg;
    const auto data = encode_corpus(toy, toy_vocab, cfg.seq_len);
    auto model = build_model(cfg, toy_vocab, Rng(42));
    const double initial = evaluate(model, data).loss;
    TrainConfig tc;
    tc.epochs = 50;
    const double after = train(model, data, EncodedCorpus{}, tc).records.back().train_loss;
    const double drop = 1.0 - after / initial;

    return {worst <= 1e-9 && drop >= 0.5, "uniform loss max |L - ln 3| " + fmt(worst) + "; toy loss "
                                              + fmt(initial, 4) + " -> " + fmt(after, 4) + " after 50 epochs ("
                                              + fmt(100 * drop, 3) + "% drop)"};
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "gradient correctness", 10.0, false, gradients},
        {2, "convolution shape law", 1.0, false, shape_law},
        {3, "overfit capability", 120.0, false, overfit},
        {4, "metric fidelity", 1.0, false, metric_fidelity},
        {5, "preprocessing fidelity", 1.0, false, preprocessing},
        {6, "serialization", 5.0, false, serialization},
        {7, "end-to-end determinism", 120.0, true, cli_determinism},
        {8, "loss sanity", 120.0, false, loss_sanity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto wall_start = std::chrono::steady_clock::now();
        const auto cpu_start = std::clock();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            c.wall_clock ? std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count()
                         : static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
        const bool in_time = seconds < c.limit_seconds;
        const bool pass = outcome.pass && in_time;
        failures += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.number << " " << c.name << ": "
                  << outcome.detail << " [" << std::fixed << std::setprecision(2) << seconds << " s "
                  << (c.wall_clock ? "wall" : "cpu") << ", limit " << std::setprecision(0) << c.limit_seconds
                  << " s" << (in_time ? "" : ", OVER LIMIT") << "]" << std::defaultfloat << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
