#include "redelex/error.hpp"

namespace redelex {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingTableFile: return "MissingTableFile";
        case ErrorCode::DescriptorParseError: return "DescriptorParseError";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::FileNotDatabase: return "FileNotDatabase";
        case ErrorCode::UnsupportedDeclaredType: return "UnsupportedDeclaredType";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::DanglingReference: return "DanglingReference";
        case ErrorCode::MissingTimeColumn: return "MissingTimeColumn";
        case ErrorCode::TargetIsKey: return "TargetIsKey";
        case ErrorCode::AllTargetsNull: return "AllTargetsNull";
        case ErrorCode::NothingMaskable: return "NothingMaskable";
        case ErrorCode::BadRatios: return "BadRatios";
        case ErrorCode::MissingTimestamps: return "MissingTimestamps";
        case ErrorCode::UnknownSeed: return "UnknownSeed";
        case ErrorCode::EmptyTrainSplit: return "EmptyTrainSplit";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::BadClassIndex: return "BadClassIndex";
        case ErrorCode::TargetMissing: return "TargetMissing";
        case ErrorCode::BadSpec: return "BadSpec";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace redelex
