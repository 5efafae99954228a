#include "powerobs/errors.hpp"

namespace powerobs {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::NonPositiveDerivedConstant: return "NonPositiveDerivedConstant";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::RiccatiDivergence: return "RiccatiDivergence";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace powerobs
