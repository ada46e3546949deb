#include <homforge/errors.hh>
#include <homforge/identifier.hh>
#include <homforge/normalform.hh>

#include <algorithm>

using std::size_t;
using std::string;
using std::vector;

namespace homforge
{
    auto star_zero_name(const Structure & s) -> string
    {
        string name = "#0";
        while (s.find(name))
            name = "#" + name;
        return name;
    }

    auto star_transform(const Structure & s) -> Structure
    {
        auto & signature = s.signature();
        if (signature.size() < 1)
            throw InvalidInput{"star transform needs at least one relation"};

        size_t total_arity = 0;
        for (auto & r : signature.relations())
            total_arity += r.arity;

        auto names = s.names();
        names.push_back(star_zero_name(s));
        Element zero = s.size();

        Signature starred{{{"P", 1}, {"R", total_arity}}};
        vector<vector<Tuple>> relations(2);
        for (Element e = 0; e < s.size(); ++e)
            relations[starred.index_of("P")].push_back(Tuple{e});

        auto & r_tuples = relations[starred.index_of("R")];
        r_tuples.push_back(Tuple(total_arity, zero));
        size_t offset = 0;
        for (size_t r = 0; r < signature.size(); ++r) {
            for (auto & t : s.relation(r)) {
                Tuple embedded(total_arity, zero);
                std::copy(t.begin(), t.end(), embedded.begin() + offset);
                r_tuples.push_back(std::move(embedded));
            }
            offset += signature[r].arity;
        }

        return Structure{std::move(starred), std::move(names), std::move(relations)};
    }

    auto merge_relations(const Structure & s) -> Structure
    {
        auto & signature = s.signature();
        if (signature.size() != 2)
            throw InvalidInput{"merging needs exactly two relations, got " + signature.to_string()};

        Signature merged{{{"R", signature[0].arity + signature[1].arity}}};
        vector<vector<Tuple>> relations(1);
        for (auto & p : s.relation(0))
            for (auto & r : s.relation(1)) {
                Tuple t = p;
                t.insert(t.end(), r.begin(), r.end());
                relations[0].push_back(std::move(t));
            }
        return Structure{std::move(merged), s.names(), std::move(relations)};
    }

    auto single_relation_transform(const PhpInstance & instance) -> PhpInstance
    {
        instance.validate();
        PhpInstance result;
        for (auto & f : instance.factors)
            result.factors.push_back(merge_relations(star_transform(f)));
        result.target = merge_relations(star_transform(instance.target));
        return result;
    }

    auto lift_hom_star(const Homomorphism & h, const PhpInstance & instance, size_t guard) -> Homomorphism
    {
        instance.validate();
        require_homomorphism(product(instance.factors, guard), instance.target, h, "star lift");

        vector<size_t> starred_sizes;
        for (auto & f : instance.factors)
            starred_sizes.push_back(f.size() + 1);
        ProductIndexer original{instance.factors}, starred{starred_sizes};
        if (starred.size() > guard)
            throw GuardExceeded{"starred product too large", starred.size(), guard};

        Element target_zero = instance.target.size();
        Homomorphism lifted;
        lifted.image.resize(starred.size());
        for (size_t e = 0; e < starred.size(); ++e) {
            auto components = starred.components(e);
            bool has_zero = false;
            for (size_t i = 0; i < components.size(); ++i)
                has_zero = has_zero || components[i] == instance.factors[i].size();
            lifted.image[e] = has_zero ? target_zero : h(original.element(components));
        }
        return lifted;
    }

    auto pad_first_coordinate(const Structure & s) -> Structure
    {
        if (s.signature().size() != 1)
            throw InvalidInput{"padding needs a single relation, got " + s.signature().to_string()};

        auto symbol = s.signature()[0];
        Signature padded{{{symbol.name, symbol.arity + 1}}};
        vector<vector<Tuple>> relations(1);
        for (Element c = 0; c < s.size(); ++c)
            for (auto & t : s.relation(0)) {
                Tuple p{c};
                p.insert(p.end(), t.begin(), t.end());
                relations[0].push_back(std::move(p));
            }
        return Structure{std::move(padded), s.names(), std::move(relations)};
    }

    GadgetDigraph::GadgetDigraph(const Structure & s, bool with_sinks) :
        _with_sinks(with_sinks)
    {
        if (s.signature().size() != 1)
            throw InvalidInput{"gadget digraphs need a single relation, got " + s.signature().to_string()};
        _arity = s.signature()[0].arity;
        if (with_sinks && _arity < 2)
            throw InvalidInput{"a sink chain needs arity at least 2"};

        auto & tuples = s.relation(0);
        _base_count = s.size();
        _tuple_count = tuples.size();

        vector<string> names;
        for (Element e = 0; e < s.size(); ++e) {
            names.push_back("v:" + s.name(e));
            _nodes.emplace_back(BaseNode{e});
        }
        for (size_t t = 0; t < tuples.size(); ++t) {
            auto shown = compose_identifier(s.names_of(tuples[t]));
            for (size_t j = 1; j <= _arity; ++j) {
                names.push_back("t" + std::to_string(j) + ":" + shown);
                _nodes.emplace_back(TupleNode{t, j});
            }
        }
        if (with_sinks)
            for (size_t j = 1; j < _arity; ++j) {
                names.push_back("s" + std::to_string(j));
                _nodes.emplace_back(SinkNode{j});
            }

        vector<vector<Tuple>> edges(1);
        for (size_t t = 0; t < tuples.size(); ++t)
            for (size_t j = 1; j <= _arity; ++j) {
                if (j < _arity)
                    edges[0].push_back(Tuple{tuple_node(t, j), tuple_node(t, j + 1)});
                edges[0].push_back(Tuple{base(tuples[t][j - 1]), tuple_node(t, j)});
            }
        if (with_sinks) {
            for (size_t j = 1; j + 1 < _arity; ++j)
                edges[0].push_back(Tuple{sink(j), sink(j + 1)});
            for (Element b = 0; b < s.size(); ++b)
                for (size_t j = 1; j < _arity; ++j)
                    edges[0].push_back(Tuple{base(b), sink(j)});
        }

        _graph = Structure{Signature{{{"E", 2}}}, std::move(names), std::move(edges)};
    }

    auto gadget_digraph(const Structure & s, bool with_sinks) -> Structure
    {
        return GadgetDigraph{s, with_sinks}.graph();
    }

    auto require_single_relation(const PhpInstance & instance) -> void
    {
        instance.validate();
        if (instance.target.signature().size() != 1)
            throw InvalidInput{"expected a single relation, got " + instance.target.signature().to_string()};
    }

    namespace
    {
        struct PaddedInstance
        {
            vector<Structure> factors;
            Structure target;
            vector<GadgetDigraph> factor_gadgets;
            GadgetDigraph target_gadget;
        };

        // An empty target gets no sink chain: with sinks, factors with empty
        // relations would map into it although no product element can.
        auto pad_and_gadget(const PhpInstance & instance) -> PaddedInstance
        {
            require_single_relation(instance);
            vector<Structure> factors;
            vector<GadgetDigraph> gadgets;
            for (auto & f : instance.factors) {
                factors.push_back(pad_first_coordinate(f));
                gadgets.emplace_back(factors.back(), false);
            }
            auto target = pad_first_coordinate(instance.target);
            GadgetDigraph target_gadget{target, ! target.empty()};
            return PaddedInstance{std::move(factors), std::move(target), std::move(gadgets), std::move(target_gadget)};
        }
    }

    auto digraph_transform(const PhpInstance & instance) -> PhpInstance
    {
        auto padded = pad_and_gadget(instance);
        PhpInstance result;
        for (auto & g : padded.factor_gadgets)
            result.factors.push_back(g.graph());
        result.target = padded.target_gadget.graph();
        return result;
    }

    auto lift_hom_digraph(const Homomorphism & h, const PhpInstance & instance, size_t guard) -> Homomorphism
    {
        require_single_relation(instance);
        require_homomorphism(product(instance.factors, guard), instance.target, h, "digraph lift");

        auto padded = pad_and_gadget(instance);
        auto r = padded.target_gadget.arity();
        auto n = instance.factors.size();

        ProductIndexer base_indexer{instance.factors};
        vector<size_t> gadget_sizes;
        for (auto & g : padded.factor_gadgets)
            gadget_sizes.push_back(g.graph().size());
        ProductIndexer gadget_indexer{gadget_sizes};
        if (gadget_indexer.size() > guard)
            throw GuardExceeded{"gadget product too large", gadget_indexer.size(), guard};

        auto & target_tuples = padded.target.relation(0);
        auto & target_gadget = padded.target_gadget;

        auto base_image = [&](const vector<Element> & elements) {
            return target_gadget.base(h(base_indexer.element(elements)));
        };

        Homomorphism lifted;
        lifted.image.resize(gadget_indexer.size());
        vector<Element> elements(n);
        for (size_t v = 0; v < gadget_indexer.size(); ++v) {
            vector<const BaseNode *> bases(n, nullptr);
            vector<const TupleNode *> chains(n, nullptr);
            size_t base_components = 0;
            for (size_t i = 0; i < n; ++i) {
                auto & node = padded.factor_gadgets[i].node(gadget_indexer.component(v, i));
                if (auto b = std::get_if<BaseNode>(&node)) {
                    bases[i] = b;
                    ++base_components;
                }
                else
                    chains[i] = &std::get<TupleNode>(node);
            }

            if (base_components == n) {
                for (size_t i = 0; i < n; ++i)
                    elements[i] = bases[i]->element;
                lifted.image[v] = base_image(elements);
                continue;
            }

            size_t least = r, most = 0;
            for (auto c : chains)
                if (c) {
                    least = std::min(least, c->index);
                    most = std::max(most, c->index);
                }

            if (0 == base_components) {
                if (least != most) {
                    lifted.image[v] = target_gadget.sink(least);
                    continue;
                }
                // common index: the image of the product tuple, at the same chain position
                Tuple image(r);
                for (size_t q = 0; q < r; ++q) {
                    for (size_t i = 0; i < n; ++i)
                        elements[i] = padded.factors[i].relation(0)[chains[i]->tuple][q];
                    image[q] = h(base_indexer.element(elements));
                }
                auto it = std::lower_bound(target_tuples.begin(), target_tuples.end(), image);
                if (it == target_tuples.end() || *it != image)
                    throw InvalidHomomorphism{"digraph lift: image tuple missing from the target"};
                lifted.image[v] = target_gadget.tuple_node(it - target_tuples.begin(), least);
                continue;
            }

            // mixed base and chain components
            if (least != most || most == r) {
                // no edge into a common-index chain node, so any base node will do
                std::fill(elements.begin(), elements.end(), 0);
                lifted.image[v] = base_image(elements);
                continue;
            }
            for (size_t i = 0; i < n; ++i)
                elements[i] = bases[i] ? bases[i]->element : padded.factors[i].relation(0)[chains[i]->tuple][least];
            lifted.image[v] = base_image(elements);
        }
        return lifted;
    }

    auto restrict_hom_digraph(const Homomorphism & h, const PhpInstance & instance, size_t guard) -> Homomorphism
    {
        auto padded = pad_and_gadget(instance);
        vector<Structure> gadget_graphs;
        for (auto & g : padded.factor_gadgets)
            gadget_graphs.push_back(g.graph());
        require_homomorphism(product(gadget_graphs, guard), padded.target_gadget.graph(), h, "digraph restriction");

        bool forced = std::all_of(instance.factors.begin(), instance.factors.end(),
            [](const Structure & f) { return ! f.relation(0).empty(); });

        ProductIndexer base_indexer{instance.factors}, gadget_indexer{gadget_graphs};
        Homomorphism restricted;
        restricted.image.resize(base_indexer.size());
        for (size_t e = 0; e < base_indexer.size(); ++e) {
            // base nodes come first in every gadget, so components carry over unchanged
            auto image = h(gadget_indexer.element(base_indexer.components(e)));
            if (auto b = std::get_if<BaseNode>(&padded.target_gadget.node(image)))
                restricted.image[e] = b->element;
            else if (forced)
                throw InvalidHomomorphism{"digraph restriction: a node with a full-length path leaves the base"};
            else
                // the product relation is empty, so any target element works
                restricted.image[e] = 0;
        }
        return restricted;
    }
}
