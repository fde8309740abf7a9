#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabmine {

// Machine-readable error classes. The service maps these onto the `code`
// member of its error envelope.
enum class ErrorCode {
  io,
  schema,
  degenerate_box,
  field_resolution,
  precondition,
  not_found,
  doc_mismatch,
  unmatched_docs,
  overflow,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tabmine
