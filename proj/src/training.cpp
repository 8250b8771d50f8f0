#include "sentiment/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"

namespace sentiment {

std::string_view to_string(OptimizerKind kind) noexcept
{
    return kind == OptimizerKind::Adam ? "adam" : "sgd";
}

std::optional<OptimizerKind> parse_optimizer(std::string_view text) noexcept
{
    if (text == "adam") {
        return OptimizerKind::Adam;
    }
    if (text == "sgd") {
        return OptimizerKind::Sgd;
    }
    return std::nullopt;
}

void TrainConfig::validate() const
{
    if (epochs < 1) {
        throw Error(ErrorCode::InvalidConfig, "epochs must be at least 1");
    }
    if (batch_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "batch size must be at least 1");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw Error(ErrorCode::InvalidConfig, "learning rate must be finite and non-negative");
    }
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0
          && adam.epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "Adam needs betas in [0, 1) and epsilon > 0");
    }
}

std::string EpochHistory::csv() const
{
    const auto field = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
    std::ostringstream out;
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const auto& r : records) {
        out << r.epoch << ',' << field(r.train_loss) << ',' << field(r.train_accuracy) << ','
            << field(r.val_loss) << ',' << field(r.val_accuracy) << '\n';
    }
    return out.str();
}

EpochHistory EpochHistory::parse_csv(std::string_view text)
{
    auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != csv::Row{"epoch", "train_loss", "train_acc", "val_loss",
                                                 "val_acc"}) {
        throw Error(ErrorCode::Io, "history must start with header "
                                   "'epoch,train_loss,train_acc,val_loss,val_acc'");
    }
    const auto number = [](const std::string& s) {
        if (s.empty()) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw Error(ErrorCode::Io, "bad number '" + s + "' in history");
        }
        return v;
    };
    EpochHistory history;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 5) {
            throw Error(ErrorCode::Io, "history row " + std::to_string(r) + " needs 5 fields");
        }
        try {
            history.records.push_back({static_cast<std::size_t>(std::stoull(row[0])),
                                       number(row[1]), number(row[2]), number(row[3]),
                                       number(row[4])});
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Io, "history row " + std::to_string(r) + " is not numeric");
        }
    }
    return history;
}

Evaluation evaluate(const Model& model, const EncodedCorpus& corpus)
{
    if (corpus.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot evaluate on an empty corpus");
    }
    Evaluation ev;
    ev.predictions.reserve(corpus.size());
    ev.probabilities.reserve(corpus.size());
    double total_loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto probs = model.forward(corpus.sequences[i]);
        total_loss += cross_entropy(probs, corpus.labels[i]);
        auto predicted = class_from_index(argmax(probs));
        correct += predicted == corpus.labels[i] ? 1 : 0;
        ev.predictions.push_back(predicted);
        ev.probabilities.push_back(probs);
    }
    const auto n = static_cast<double>(corpus.size());
    ev.loss = total_loss / n;
    ev.accuracy = static_cast<double>(correct) / n;
    return ev;
}

EpochHistory train(Model& model, const EncodedCorpus& train_set, const EncodedCorpus& val_set,
                   const TrainConfig& config, const EpochCallback& on_epoch)
{
    config.validate();
    if (train_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "training set is empty");
    }

    auto params = model.parameters();
    Gradients grads = model.zero_gradients();
    AdamState adam = AdamState::zeros_like(params);
    const Rng shuffle_root = Rng(config.seed).split("shuffle");

    std::vector<std::size_t> order(train_set.size());
    std::vector<TokenSequence> batch_seqs;
    std::vector<Sentiment> batch_labels;
    EpochHistory history;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (config.shuffle) {
            Rng rng = shuffle_root.split(epoch);
            shuffle(order, rng);
        }
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            ++batch_index;
            const auto end = std::min(order.size(), start + config.batch_size);
            batch_seqs.clear();
            batch_labels.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch_seqs.push_back(train_set.sequences[order[i]]);
                batch_labels.push_back(train_set.labels[order[i]]);
            }
            for (auto& g : grads) {
                g.fill(0.0);
            }
            const double loss = model.loss_and_gradient(batch_seqs, batch_labels, grads);
            if (!std::isfinite(loss)) {
                throw NonFiniteLoss(epoch, batch_index);
            }
            if (config.optimizer == OptimizerKind::Adam) {
                adam_step(params, grads, adam, config.learning_rate, config.adam);
            } else {
                sgd_step(params, grads, config.learning_rate);
            }
        }

        EpochRecord record;
        record.epoch = epoch;
        const auto on_train = evaluate(model, train_set);
        record.train_loss = on_train.loss;
        record.train_accuracy = on_train.accuracy;
        if (val_set.empty()) {
            record.val_loss = std::numeric_limits<double>::quiet_NaN();
            record.val_accuracy = std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto on_val = evaluate(model, val_set);
            record.val_loss = on_val.loss;
            record.val_accuracy = on_val.accuracy;
        }
        if (!std::isfinite(record.train_loss)) {
            throw NonFiniteLoss(epoch, batch_index);
        }
        history.records.push_back(record);
        if (on_epoch) {
            on_epoch(record);
        }
    }
    return history;
}

}  // namespace sentiment
