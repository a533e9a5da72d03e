#pragma once

#include <stdexcept>
#include <string>

namespace meshcat {

/// Error codes surfaced by library operations. The CLI maps these to exit
/// codes: input-side problems exit 2, failed hypotheses/checks exit 1.
enum class errc {
  invalid_argument,
  unknown_vertex,
  unknown_arrow,
  duplicate_name,
  endpoint_mismatch,
  invalid_path,
  cycle_needs_bound,
  no_mesh,
  no_mesh_relation,
  lp_of_zero,
  not_reducible,
  path_outside_context,
  incomplete_order,
  order_not_mesh_lex,
  mesh_lex_unavailable,
  hypothesis_violated,
  no_lift,
  invalid_covering,
  malformed_layer_spec,
  field_mismatch,
  parse_error,
  invalid_quiver,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "INVALID_ARGUMENT";
    case errc::unknown_vertex: return "UNKNOWN_VERTEX";
    case errc::unknown_arrow: return "UNKNOWN_ARROW";
    case errc::duplicate_name: return "DUPLICATE_NAME";
    case errc::endpoint_mismatch: return "ENDPOINT_MISMATCH";
    case errc::invalid_path: return "INVALID_PATH";
    case errc::cycle_needs_bound: return "CYCLE_NEEDS_BOUND";
    case errc::no_mesh: return "NO_MESH";
    case errc::no_mesh_relation: return "NO_MESH_RELATION";
    case errc::lp_of_zero: return "LP_OF_ZERO";
    case errc::not_reducible: return "NOT_REDUCIBLE";
    case errc::path_outside_context: return "PATH_OUTSIDE_CONTEXT";
    case errc::incomplete_order: return "INCOMPLETE_ORDER";
    case errc::order_not_mesh_lex: return "ORDER_NOT_MESH_LEX";
    case errc::mesh_lex_unavailable: return "MESH_LEX_UNAVAILABLE";
    case errc::hypothesis_violated: return "HYPOTHESIS_VIOLATED";
    case errc::no_lift: return "NO_LIFT";
    case errc::invalid_covering: return "INVALID_COVERING";
    case errc::malformed_layer_spec: return "MALFORMED_LAYER_SPEC";
    case errc::field_mismatch: return "FIELD_MISMATCH";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::invalid_quiver: return "INVALID_QUIVER";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace meshcat
