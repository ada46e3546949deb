#ifndef HOMFORGE_HEADER_QUERY_HH
#define HOMFORGE_HEADER_QUERY_HH 1

#include <homforge/solver.hh>
#include <homforge/structure.hh>

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace homforge
{
    struct Atom
    {
        std::string relation;
        std::vector<std::string> arguments;

        auto operator<=>(const Atom &) const = default;
    };

    /**
     * A conjunctive query: free variables (in answer order, repeats allowed),
     * existentially bound variables, and a conjunction of atoms. A query with no
     * free variables is Boolean.
     */
    struct ConjunctiveQuery
    {
        std::vector<std::string> free;
        std::vector<std::string> bound;
        std::vector<Atom> atoms;

        auto operator<=>(const ConjunctiveQuery &) const = default;
    };

    /// Throws InvalidInput (UnsafeQuery for safety violations) if q is malformed over the signature.
    auto check_query(const ConjunctiveQuery & q, const Signature & signature) -> void;

    /// One element per variable (free first, then bound), one tuple per atom, the free tuple distinguished.
    auto canonical_structure(const ConjunctiveQuery & q, const Signature & signature) -> PointedStructure;

    /**
     * One variable per element, named by its identifier, one atom per tuple.
     * Throws UnsafeQuery if a distinguished element occurs in no tuple.
     */
    auto canonical_query(const PointedStructure & p) -> ConjunctiveQuery;

    /// All answer tuples; {()} or {} for a Boolean query.
    auto evaluate(const ConjunctiveQuery & q, const Structure & s, const SolverConfig & config = {}) -> TupleSet;

    /// q(x1..xr) = exists y1..yr . E(x1,y1) & ... & E(xr,yr) & E(y1,y2) & ... & E(y(r-1),yr)
    auto path_fan_query(std::size_t r) -> ConjunctiveQuery;

    /// {"free": ["x"], "bound": ["y"], "atoms": [["E", ["x","y"]]]}
    auto query_to_json(const ConjunctiveQuery & q) -> nlohmann::json;
    auto query_from_json(const nlohmann::json & j) -> ConjunctiveQuery;
}

#endif
