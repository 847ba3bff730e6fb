#pragma once

#include <stdexcept>
#include <string>

namespace selbv {

/// A rank passed to select is 0 or exceeds the number of ones.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when a serialized bit vector or index cannot be decoded.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { bad_magic, bad_header, truncated, bad_payload };

  ParseError(Kind kind, std::string const& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace selbv
