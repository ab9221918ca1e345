// SPDX-License-Identifier: Apache-2.0
#include "rerisk/error.hpp"

namespace rerisk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::UnknownPhenomenonId: return "UnknownPhenomenonId";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::DuplicateRank: return "DuplicateRank";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::InconsistentEvidence: return "InconsistentEvidence";
    case ErrorCode::UnknownNodeId: return "UnknownNodeId";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidInputs: return "InvalidInputs";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string record_id,
             std::string field, std::vector<std::string> details)
    : std::runtime_error(message),
      code_(code),
      record_id_(std::move(record_id)),
      field_(std::move(field)),
      details_(std::move(details)) {}

}  // namespace rerisk
