#ifndef HOMFORGE_HEADER_NORMALFORM_HH
#define HOMFORGE_HEADER_NORMALFORM_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/product.hh>
#include <homforge/structure.hh>

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace homforge
{
    /**
     * Adds a fresh zero element (see star_zero_name()), a unary relation P
     * holding the original domain, and a single relation R whose arity is the
     * sum of the original arities. R holds the all-zero tuple and, for each
     * tuple of the i-th relation (in signature order), that tuple placed in the
     * i-th block with zeros everywhere else. The zero element is last in the
     * domain; all other elements keep their positions.
     */
    auto star_transform(const Structure & s) -> Structure;

    /// The reserved identifier star_transform() uses for the zero element of s.
    auto star_zero_name(const Structure & s) -> std::string;

    /// Two relations P, R (in signature order) become the single relation R = P x R.
    auto merge_relations(const Structure & s) -> Structure;

    /// star_transform then merge_relations, on every structure of the instance.
    auto single_relation_transform(const PhpInstance & instance) -> PhpInstance;

    /**
     * Extends h : prod A_i -> B to prod A_i* -> B*, sending every element with a
     * zero component to the zero of B*. The result is a homomorphism for both the
     * starred and the merged instance.
     */
    auto lift_hom_star(const Homomorphism & h, const PhpInstance & instance,
        std::size_t guard = default_product_guard) -> Homomorphism;

    /// R of arity r becomes C x R of arity r + 1, so the first coordinate covers the domain.
    auto pad_first_coordinate(const Structure & s) -> Structure;

    struct BaseNode
    {
        Element element;
        auto operator<=>(const BaseNode &) const = default;
    };

    /// t^j: the j-th chain node (1-based) of tuple number `tuple` of the relation.
    struct TupleNode
    {
        std::size_t tuple;
        std::size_t index;
        auto operator<=>(const TupleNode &) const = default;
    };

    /// s^j, 1-based.
    struct SinkNode
    {
        std::size_t index;
        auto operator<=>(const SinkNode &) const = default;
    };

    using GadgetNode = std::variant<BaseNode, TupleNode, SinkNode>;

    /**
     * The digraph encoding of a single-relation structure. Node order: base
     * elements in domain order, then t^1..t^r for each tuple in relation order,
     * then sinks s^1..s^(r-1). Names are "v:<element>", "t<j>:<tuple>" and
     * "s<j>", which cannot collide.
     */
    class GadgetDigraph
    {
    public:
        GadgetDigraph(const Structure & s, bool with_sinks);

        auto graph() const -> const Structure & { return _graph; }
        auto arity() const -> std::size_t { return _arity; }
        auto base_count() const -> std::size_t { return _base_count; }
        auto tuple_count() const -> std::size_t { return _tuple_count; }
        auto has_sinks() const -> bool { return _with_sinks; }

        auto node(Element e) const -> const GadgetNode & { return _nodes[e]; }

        auto base(Element element) const -> Element { return element; }
        auto tuple_node(std::size_t tuple, std::size_t index) const -> Element
        {
            return Element(_base_count + tuple * _arity + (index - 1));
        }
        auto sink(std::size_t index) const -> Element
        {
            return Element(_base_count + _tuple_count * _arity + (index - 1));
        }

    private:
        Structure _graph;
        std::vector<GadgetNode> _nodes;
        std::size_t _arity;
        std::size_t _base_count;
        std::size_t _tuple_count;
        bool _with_sinks;
    };

    auto gadget_digraph(const Structure & s, bool with_sinks) -> Structure;

    /// Pads every structure, then factors become sink-free gadgets and the target a gadget with sinks.
    auto digraph_transform(const PhpInstance & instance) -> PhpInstance;

    /**
     * Turns h : prod A_i -> B into h' : prod G(A_i) -> G(B) by classifying each
     * product node: all-base nodes follow h; chain nodes with one common index j
     * go to the j-th chain node of the image tuple; chain nodes with mixed
     * indices go to the sink numbered by the least index; anything else copies
     * the image of a base node whose edges into common-index chain nodes
     * include its own.
     */
    auto lift_hom_digraph(const Homomorphism & h, const PhpInstance & instance,
        std::size_t guard = default_product_guard) -> Homomorphism;

    /**
     * Restricts h' : prod G(A_i) -> G(B) to the all-base nodes. Throws
     * InvalidHomomorphism if h' does not validate or sends a base node outside
     * the base of G(B).
     */
    auto restrict_hom_digraph(const Homomorphism & h, const PhpInstance & instance,
        std::size_t guard = default_product_guard) -> Homomorphism;

    /// The single relation of every structure; throws InvalidInput otherwise.
    auto require_single_relation(const PhpInstance & instance) -> void;
}

#endif
