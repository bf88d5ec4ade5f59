#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace census {

enum class Errc {
  invalid_side,
  invalid_dimension,
  disconnected,
  asymmetric,
  self_loop,
  parallel_edge,
  node_out_of_range,
  size_guard,
  irregular_graph,
  unknown_family,
  out_of_range,
  precondition,
  bipartite,
  parse,
  all_absent,
};

std::string_view errc_name(Errc code) noexcept;

/// Validation failure raised by every module; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace census
