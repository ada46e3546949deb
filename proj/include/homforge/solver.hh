#ifndef HOMFORGE_HEADER_SOLVER_HH
#define HOMFORGE_HEADER_SOLVER_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/product.hh>
#include <homforge/structure.hh>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace homforge
{
    enum class VariableOrder
    {
        most_constrained_first,
        input_order
    };

    enum class Propagation
    {
        none,
        arc_consistency
    };

    struct SolverConfig
    {
        VariableOrder variable_order = VariableOrder::most_constrained_first;
        Propagation propagation = Propagation::arc_consistency;
        std::optional<std::size_t> enumeration_cap;
        std::size_t product_guard = default_product_guard;

        /// decide_php builds the constraint model straight from the factors, without a product Structure.
        bool lazy_product = false;

        /// Worker threads for root-level branch splitting in existence searches.
        unsigned threads = 1;

        /// Throws InvalidInput for a zero cap, guard or thread count.
        auto validate() const -> void;
    };

    /**
     * Backtracking search: one variable per source element, one constraint per
     * source tuple, generalised arc consistency over the tuple constraints when
     * enabled. Ties in variable selection go to the earliest element in domain
     * order and values are tried in target domain order, so results are
     * deterministic for a fixed configuration, whatever the thread count.
     */
    auto find_homomorphism(const Structure & source, const Structure & target, const SolverConfig & config = {})
        -> std::optional<Homomorphism>;

    /// As find_homomorphism(), restricted to maps agreeing with the given (source, target) pairs.
    auto find_homomorphism_extending(const Structure & source, const Structure & target,
        std::span<const std::pair<Element, Element>> fixed, const SolverConfig & config = {})
        -> std::optional<Homomorphism>;

    /// Every homomorphism, sorted lexicographically. Throws CapExceeded past config.enumeration_cap.
    auto enumerate_homomorphisms(const Structure & source, const Structure & target, const SolverConfig & config = {})
        -> std::vector<Homomorphism>;

    /**
     * All tuples b such that some homomorphism sends the distinguished tuple to
     * b, each with one such homomorphism. For an empty distinguished tuple the
     * result is {()} if any homomorphism exists and empty otherwise.
     */
    auto image_witnesses(const PointedStructure & source, const Structure & target, const SolverConfig & config = {})
        -> std::map<Tuple, Homomorphism>;

    auto image_set(const PointedStructure & source, const Structure & target, const SolverConfig & config = {})
        -> TupleSet;

    struct PhpVerdict
    {
        bool holds = false;

        /// Indexed by the elements of product(factors).
        std::optional<Homomorphism> witness;

        explicit operator bool() const { return holds; }
    };

    /// Does the product of the factors map homomorphically to the target?
    auto decide_php(const PhpInstance & instance, const SolverConfig & config = {}) -> PhpVerdict;
}

#endif
