// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rerisk {

enum class ErrorCode {
  MalformedInput,
  UnknownPhenomenonId,
  KindMismatch,
  DuplicateRank,
  RankOutOfRange,
  DuplicateId,
  EmptyDataset,
  CycleDetected,
  InconsistentEvidence,
  UnknownNodeId,
  TooLarge,
  InvalidInputs,
  InvalidThresholds,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `record_id` and `field` locate the
// offending input when there is one; `details` carries a cycle witness or
// closest-match suggestions depending on the code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string record_id = {},
        std::string field = {}, std::vector<std::string> details = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& record_id() const noexcept { return record_id_; }
  const std::string& field() const noexcept { return field_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string record_id_;
  std::string field_;
  std::vector<std::string> details_;
};

}  // namespace rerisk
