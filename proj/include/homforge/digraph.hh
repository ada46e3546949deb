#ifndef HOMFORGE_HEADER_DIGRAPH_HH
#define HOMFORGE_HEADER_DIGRAPH_HH 1

#include <homforge/structure.hh>

#include <cstddef>
#include <optional>
#include <vector>

namespace homforge
{
    /// True iff the signature is a single binary relation.
    auto is_digraph(const Structure & s) -> bool;

    /**
     * For a digraph (single binary relation), the number of edges on a longest
     * directed path starting at each node. Returns nullopt if the graph has a
     * cycle (including self-loops). Throws InvalidInput for non-digraphs.
     */
    auto longest_outgoing_paths(const Structure & digraph) -> std::optional<std::vector<std::size_t>>;

    /// Maximum of longest_outgoing_paths(), 0 for an empty graph; nullopt if cyclic.
    auto longest_path_length(const Structure & digraph) -> std::optional<std::size_t>;
}

#endif
