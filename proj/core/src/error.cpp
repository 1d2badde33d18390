#include "papercad/error.hpp"

namespace papercad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::Unit: return "UnitError";
    case ErrorCode::UnknownPart: return "UnknownPart";
    case ErrorCode::BadRotation: return "BadRotation";
    case ErrorCode::MissingPlacement: return "MissingPlacement";
    case ErrorCode::UnknownFootprint: return "UnknownFootprint";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SeedConflict: return "SeedConflict";
    case ErrorCode::UnknownNetName: return "UnknownNetName";
    case ErrorCode::NoSeeds: return "NoSeeds";
    case ErrorCode::PadClearanceViolation: return "PadClearanceViolation";
    case ErrorCode::FeatureTooThin: return "FeatureTooThin";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::TapeWidthMismatch: return "TapeWidthMismatch";
    case ErrorCode::OutOfBoard: return "OutOfBoard";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message, ErrorDetail detail)
    : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

namespace {
std::string with_position(const std::string& message, int line, int column) {
  if (line <= 0) return message;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}
}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorCode::Parse, with_position(message, line, column),
            ErrorDetail{.parts = {}, .nets = {}, .location = std::nullopt, .line = line, .column = column}) {}

}  // namespace papercad
