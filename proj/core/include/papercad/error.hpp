#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "papercad/geometry.hpp"

namespace papercad {

enum class ErrorCode {
  Parse,
  Validation,
  Unit,
  UnknownPart,
  BadRotation,
  MissingPlacement,
  UnknownFootprint,
  Infeasible,
  SeedConflict,
  UnknownNetName,
  NoSeeds,
  PadClearanceViolation,
  FeatureTooThin,
  ModeMismatch,
  TapeWidthMismatch,
  OutOfBoard,
  Io,
};

std::string_view to_string(ErrorCode code);

// Structured context attached to an error so frontends (CLI, HTTP) can
// name the offending parts and nets without re-parsing the message.
struct ErrorDetail {
  std::vector<std::string> parts;
  std::vector<int> nets;
  std::optional<Point> location;
  int line = 0;    // 1-based; 0 when unknown
  int column = 0;  // 1-based; 0 when unknown
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, ErrorDetail detail = {});

  ErrorCode code() const noexcept { return code_; }
  const ErrorDetail& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  ErrorDetail detail_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, int line = 0, int column = 0);
};

}  // namespace papercad
