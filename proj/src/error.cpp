#include "seer/error.hpp"

namespace seer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::dangling_endpoint: return "dangling_endpoint";
    case ErrorCode::self_loop: return "self_loop";
    case ErrorCode::parallel_edge: return "parallel_edge";
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::node_set_mismatch: return "node_set_mismatch";
    case ErrorCode::negative_eigenvalue: return "negative_eigenvalue";
    case ErrorCode::eigensolver_failure: return "eigensolver_failure";
    case ErrorCode::invalid_parameter: return "invalid_parameter";
    case ErrorCode::ordering_violation: return "ordering_violation";
    case ErrorCode::nonpositive_value: return "nonpositive_value";
    case ErrorCode::unknown_symbol: return "unknown_symbol";
    case ErrorCode::unknown_context: return "unknown_context";
    case ErrorCode::length_out_of_bounds: return "length_out_of_bounds";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::class_absent: return "class_absent";
    case ErrorCode::io_failure: return "io_failure";
  }
  return "unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& subject,
                    const std::string& detail) {
  std::string msg(to_string(code));
  msg += "(\"" + subject + "\")";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace seer
