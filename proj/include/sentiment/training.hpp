#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentiment/model.hpp"
#include "sentiment/optimizer.hpp"
#include "sentiment/vocabulary.hpp"

namespace sentiment {

enum class OptimizerKind : std::uint8_t { Sgd, Adam };

std::string_view to_string(OptimizerKind kind) noexcept;
std::optional<OptimizerKind> parse_optimizer(std::string_view text) noexcept;

struct TrainConfig {
    std::size_t epochs = 60;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    AdamSettings adam;
    std::uint64_t seed = 42;
    bool shuffle = true;

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    /// NaN when no validation set was given.
    double val_loss = 0.0;
    double val_accuracy = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct EpochHistory {
    std::vector<EpochRecord> records;

    /// CSV `epoch,train_loss,train_acc,val_loss,val_acc`; missing
    /// validation values are written as empty fields.
    std::string csv() const;
    static EpochHistory parse_csv(std::string_view text);
};

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<Sentiment> predictions;
    std::vector<Probabilities> probabilities;
};

/// Mean cross-entropy, argmax predictions and their accuracy.
Evaluation evaluate(const Model& model, const EncodedCorpus& corpus);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch training. Each epoch: optional seeded shuffle, one optimizer
/// step per batch on the batch-mean loss, then a history record over the
/// full train and validation sets. val may be empty.
///
/// Throws NonFiniteLoss with the 1-based epoch and batch when a batch loss
/// is NaN or infinite.
EpochHistory train(Model& model, const EncodedCorpus& train_set, const EncodedCorpus& val_set,
                   const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace sentiment
