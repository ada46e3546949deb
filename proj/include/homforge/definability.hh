#ifndef HOMFORGE_HEADER_DEFINABILITY_HH
#define HOMFORGE_HEADER_DEFINABILITY_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/query.hh>
#include <homforge/solver.hh>
#include <homforge/structure.hh>

#include <cstddef>
#include <variant>
#include <vector>

namespace homforge
{
    struct Definable
    {
        ConjunctiveQuery query;
    };

    /// witness_hom maps pointed_product.structure into I, sending the distinguished tuple to witness_tuple.
    struct NotDefinable
    {
        Tuple witness_tuple;
        Homomorphism witness_hom;
        PointedStructure pointed_product;
    };

    using DefinabilityVerdict = std::variant<Definable, NotDefinable>;

    /**
     * The product of one copy of I per tuple of S (in sorted order), pointed at
     * the tuple whose j-th element pairs up the j-th entries of all tuples of S.
     */
    auto pointed_product(const Structure & instance, const TupleSet & selection,
        std::size_t guard = default_product_guard) -> PointedStructure;

    /**
     * S is definable by a conjunctive query iff every homomorphic image of the
     * pointed product's distinguished tuple lies in S; the canonical query of the
     * pointed product then defines S. Otherwise the least image outside S and
     * its homomorphism certify that no conjunctive query defines S.
     */
    auto decide_cq_definability(const Structure & instance, const TupleSet & selection,
        const SolverConfig & config = {}) -> DefinabilityVerdict;

    struct DefinabilityReduction
    {
        Structure instance;
        TupleSet selection;
        std::vector<Element> apexes;

        /// Common longest directed path length of the input structures.
        std::size_t path_length;
    };

    /**
     * Disjoint union of the factors and the target, plus apexes a1..an and b
     * with edges to every element of their part. The product maps to the
     * target iff {a1..an} is not CQ-definable in the result. Every input must
     * be an acyclic digraph with the same longest path length.
     */
    auto reduce_php_to_nondefinability(const PhpInstance & instance) -> DefinabilityReduction;

    /// True iff the apexes are exactly the nodes with an outgoing path of length path_length + 1.
    auto apex_path_audit(const DefinabilityReduction & reduction) -> bool;
}

#endif
