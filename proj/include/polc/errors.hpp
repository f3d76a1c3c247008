#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polc {

/// Base of every error raised by the library. `kind()` is a stable short
/// name used in CLI diagnostics and scenario failure labels.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define POLC_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  }

// claim-dsl
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& expected,
              const std::string& found)
      : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) +
                                 ": expected " + expected + ", found " + found),
        line_(line),
        column_(column),
        expected_(expected) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};
POLC_DEFINE_ERROR(ValidationError);
POLC_DEFINE_ERROR(UnknownRegionError);

// spatial-grid
POLC_DEFINE_ERROR(DegeneratePolygonError);
POLC_DEFINE_ERROR(EmptyRegionError);
POLC_DEFINE_ERROR(NotMemberError);

// temporal-slots
POLC_DEFINE_ERROR(PreGenesisError);
POLC_DEFINE_ERROR(OutOfOrderError);

// attestation
POLC_DEFINE_ERROR(SignatureError);

// constraint-core
POLC_DEFINE_ERROR(LengthMismatchError);
POLC_DEFINE_ERROR(CapacityError);
POLC_DEFINE_ERROR(DepthMismatchError);
POLC_DEFINE_ERROR(GroupProfileError);
POLC_DEFINE_ERROR(EmptyTranscriptError);

// proof-engine
POLC_DEFINE_ERROR(UnsatisfiedError);
POLC_DEFINE_ERROR(BackendError);

// logic-oracle
POLC_DEFINE_ERROR(UnboundIdentifierError);

// file formats
POLC_DEFINE_ERROR(FormatError);

#undef POLC_DEFINE_ERROR

}  // namespace polc
