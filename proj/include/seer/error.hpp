#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seer {

enum class ErrorCode {
  schema_violation,
  duplicate_id,
  dangling_endpoint,
  self_loop,
  parallel_edge,
  unknown_id,
  node_set_mismatch,
  negative_eigenvalue,
  eigensolver_failure,
  invalid_parameter,
  ordering_violation,
  nonpositive_value,
  unknown_symbol,
  unknown_context,
  length_out_of_bounds,
  overflow,
  empty_input,
  non_finite,
  out_of_range,
  shape_mismatch,
  class_absent,
  io_failure,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type. `subject()` names the
// offending element (node id, symbol, parameter name) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace seer
