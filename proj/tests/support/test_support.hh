#ifndef HOMFORGE_HEADER_TEST_SUPPORT_HH
#define HOMFORGE_HEADER_TEST_SUPPORT_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/structure.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace homforge::test
{
    struct RelationSpec
    {
        std::string name;
        std::size_t arity;
        std::vector<std::string> tuples; // space separated identifiers
    };

    /// structure("a b c", {{"E", 2, {"a b", "b c"}}})
    auto structure(const std::string & domain, const std::vector<RelationSpec> & relations) -> Structure;

    auto one_edge() -> Structure;              // ({a,b}, E={(a,b)})
    auto self_loop(const std::string & v = "v") -> Structure;
    auto isolated_vertex(const std::string & v = "v") -> Structure;
    auto directed_path(std::size_t nodes) -> Structure; // a -> b -> c ...
    auto directed_cycle(std::size_t nodes) -> Structure;

    /**
     * Every map from source to target that preserves all tuples, by trying all
     * |target|^|source| maps in lexicographic order. Uses its own tuple lookup
     * rather than the library's validator or solver.
     */
    auto brute_force_homomorphisms(const Structure & source, const Structure & target, std::size_t stop_after = SIZE_MAX)
        -> std::vector<Homomorphism>;

    auto brute_force_exists(const Structure & source, const Structure & target) -> bool;

    /// Existence of a homomorphism from the product, enumerating maps from tuples of factor elements directly.
    auto brute_force_php(const std::vector<Structure> & factors, const Structure & target) -> bool;

    auto random_signature(std::mt19937_64 & rng, std::size_t max_relations, std::size_t max_arity) -> Signature;

    /// Domain e0..e(n-1) with each possible tuple present with the given probability.
    auto random_structure(std::mt19937_64 & rng, const Signature & signature, std::size_t domain_size, double density,
        const std::string & prefix = "e") -> Structure;

    /// As random_structure, with at most max_tuples tuples per relation.
    auto random_sparse_structure(std::mt19937_64 & rng, const Signature & signature, std::size_t domain_size,
        std::size_t max_tuples, const std::string & prefix = "e") -> Structure;

    auto uniform(std::mt19937_64 & rng, std::size_t lo, std::size_t hi) -> std::size_t;
}

#endif
