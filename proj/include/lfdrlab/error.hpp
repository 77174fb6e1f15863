#pragma once

#include <stdexcept>
#include <string>

namespace lfdr {

enum class ErrorCode {
  InvalidArgument,
  InvalidModel,
  EmptyRegion,
  FullRegion,
  Infeasible,
  InvalidPValue,
  InvalidLfdr,
  LengthMismatch,
  EmptyInput,
  NotEnoughData,
  DegenerateCF,
  DegenerateData,
  DegenerateMarginal,
  MalformedInput,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto a process exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lfdr
