#ifndef HOMFORGE_HEADER_STRUCTURE_HH
#define HOMFORGE_HEADER_STRUCTURE_HH 1

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace homforge
{
    /// Position of an element in a structure's domain.
    using Element = std::uint32_t;

    using Tuple = std::vector<Element>;

    using TupleSet = std::set<Tuple>;

    struct RelationSymbol
    {
        std::string name;
        std::size_t arity;

        auto operator<=>(const RelationSymbol &) const = default;
    };

    /**
     * A relational schema. Relations are kept sorted by name, so two signatures
     * with the same symbols compare equal no matter how they were listed, and
     * relation indices are stable across parsing and serialisation.
     */
    class Signature
    {
    public:
        Signature() = default;
        explicit Signature(std::vector<RelationSymbol> relations);

        auto relations() const -> const std::vector<RelationSymbol> & { return _relations; }
        auto size() const -> std::size_t { return _relations.size(); }
        auto operator[](std::size_t i) const -> const RelationSymbol & { return _relations[i]; }

        auto find(std::string_view name) const -> std::optional<std::size_t>;

        /// As find(), but throws InvalidInput for an unknown name.
        auto index_of(std::string_view name) const -> std::size_t;

        auto operator==(const Signature &) const -> bool = default;

        auto to_string() const -> std::string;

    private:
        std::vector<RelationSymbol> _relations;
    };

    /**
     * A finite relational structure. The domain is an ordered list of distinct,
     * nonempty string identifiers; an Element is a position in that list. Each
     * relation is stored as a sorted, duplicate-free list of tuples.
     *
     * The domain order is the order used for all tie-breaking in the solver.
     * Instances are immutable once constructed.
     */
    class Structure
    {
    public:
        Structure() = default;

        /// Validates arities and element ranges; sorts and deduplicates each relation.
        Structure(Signature signature, std::vector<std::string> domain, std::vector<std::vector<Tuple>> relations);

        auto signature() const -> const Signature & { return _signature; }
        auto size() const -> std::size_t { return _names.size(); }
        auto empty() const -> bool { return _names.empty(); }

        auto name(Element e) const -> const std::string & { return _names[e]; }
        auto names() const -> const std::vector<std::string> & { return _names; }
        auto find(std::string_view name) const -> std::optional<Element>;

        /// As find(), but throws InvalidInput for an unknown identifier.
        auto element(std::string_view name) const -> Element;

        auto relation(std::size_t index) const -> const std::vector<Tuple> & { return _relations[index]; }
        auto relation(std::string_view name) const -> const std::vector<Tuple> &;
        auto relations() const -> const std::vector<std::vector<Tuple>> & { return _relations; }

        auto contains(std::size_t relation, std::span<const Element> tuple) const -> bool;

        auto tuple_count() const -> std::size_t;

        /// Translates a tuple of identifiers; throws InvalidInput on unknown identifiers.
        auto tuple_of(std::span<const std::string> names) const -> Tuple;
        auto names_of(std::span<const Element> tuple) const -> std::vector<std::string>;

    private:
        Signature _signature;
        std::vector<std::string> _names;
        std::unordered_map<std::string, Element> _index;
        std::vector<std::vector<Tuple>> _relations;
    };

    /**
     * Equality up to the order of the domain: same signature, same identifier
     * set, and the same tuples of identifiers in every relation.
     */
    auto same_structure(const Structure & a, const Structure & b) -> bool;

    /// Incremental construction by identifier.
    class StructureBuilder
    {
    public:
        explicit StructureBuilder(Signature signature);

        auto add_element(std::string name) -> Element;
        auto add_elements(std::span<const std::string> names) -> void;

        auto add_tuple(std::size_t relation, Tuple tuple) -> void;
        auto add_tuple(std::string_view relation, std::span<const std::string> names) -> void;

        auto find(std::string_view name) const -> std::optional<Element>;

        auto build() && -> Structure;

    private:
        Signature _signature;
        std::vector<std::string> _names;
        std::unordered_map<std::string, Element> _index;
        std::vector<std::vector<Tuple>> _relations;
    };

    /// A structure together with a distinguished tuple (possibly empty, for Boolean queries).
    struct PointedStructure
    {
        Structure structure;
        Tuple distinguished;

        PointedStructure() = default;
        PointedStructure(Structure s, Tuple d);
    };

    /// Factors A_1..A_n and a target B, all over one signature.
    struct PhpInstance
    {
        std::vector<Structure> factors;
        Structure target;

        /// Throws InvalidInput if there are no factors, SignatureMismatch if signatures differ.
        auto validate() const -> void;
    };

    /// Throws SignatureMismatch unless every structure has the first one's signature.
    auto require_shared_signature(std::span<const Structure> structures, std::string_view context) -> void;
    auto require_same_signature(const Structure & a, const Structure & b, std::string_view context) -> void;
}

#endif
