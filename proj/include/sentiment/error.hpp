#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sentiment {

enum class ErrorCode {
    ShapeMismatch,
    InvalidArgument,
    Io,
    MissingColumn,
    UnparsableLabel,
    EmptyFile,
    DegenerateSplit,
    IdOutOfRange,
    SequenceTooShort,
    EmptySequence,
    NoCachedForward,
    InvalidConfig,
    NonFiniteLoss,
    FormatVersionMismatch,
    CorruptFile,
    LengthMismatch,
    LabelOutOfRange,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// A CSV data row whose label is not one of "-1", "0", "1".
class UnparsableLabel : public Error {
public:
    UnparsableLabel(std::size_t row, const std::string& value)
        : Error(ErrorCode::UnparsableLabel,
                "row " + std::to_string(row) + ": label '" + value + "' is not -1, 0 or 1"),
          row_(row)
    {}

    /// 1-based data row (the header is not counted).
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Training produced a NaN or infinite loss.
class NonFiniteLoss : public Error {
public:
    NonFiniteLoss(std::size_t epoch, std::size_t batch)
        : Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch) + ", batch "
                                              + std::to_string(batch)),
          epoch_(epoch), batch_(batch)
    {}

    std::size_t epoch() const noexcept { return epoch_; }
    std::size_t batch() const noexcept { return batch_; }

private:
    std::size_t epoch_;
    std::size_t batch_;
};

}  // namespace sentiment
