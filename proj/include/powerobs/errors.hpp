#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace powerobs {

enum class ErrorKind {
  Parse,
  Validation,
  NonPositiveDerivedConstant,
  NonFiniteState,
  RiccatiDivergence,
  EmptyWindow,
  Io,
};

/// Machine-parsable name used as the prefix of every reported error.
std::string_view kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace powerobs
