#include "sentiment/error.hpp"

namespace sentiment {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparsableLabel: return "UnparsableLabel";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::NoCachedForward: return "NoCachedForward";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    }
    return "Unknown";
}

}  // namespace sentiment
