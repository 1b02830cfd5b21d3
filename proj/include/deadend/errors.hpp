#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace deadend {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: element literals, group specs, JSON documents, config.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operands from different groups, or a payload that is not an element of
/// the group it was handed to.
class MixedGroupError : public Error {
 public:
  using Error::Error;
};

/// Checked integer arithmetic left the configured bit width.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A search ran past its element, radius or wall-time budget. The radius of
/// the last fully completed sphere is kept.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint32_t radius_reached)
      : Error(what), radius_reached_(radius_reached) {}

  std::uint32_t radius_reached() const noexcept { return radius_reached_; }

 private:
  std::uint32_t radius_reached_;
};

/// A structural check failed. For the construction pipeline this means the
/// implementation (not the input) is wrong.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace deadend
