#include "collision_census/error.hpp"

namespace census {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_side: return "invalid_side";
    case Errc::invalid_dimension: return "invalid_dimension";
    case Errc::disconnected: return "disconnected";
    case Errc::asymmetric: return "asymmetric";
    case Errc::self_loop: return "self_loop";
    case Errc::parallel_edge: return "parallel_edge";
    case Errc::node_out_of_range: return "node_out_of_range";
    case Errc::size_guard: return "size_guard";
    case Errc::irregular_graph: return "irregular_graph";
    case Errc::unknown_family: return "unknown_family";
    case Errc::out_of_range: return "out_of_range";
    case Errc::precondition: return "precondition";
    case Errc::bipartite: return "bipartite";
    case Errc::parse: return "parse";
    case Errc::all_absent: return "all_absent";
  }
  return "unknown";
}

}  // namespace census
