#include <homforge/definability.hh>
#include <homforge/digraph.hh>
#include <homforge/errors.hh>
#include <homforge/product.hh>

#include <algorithm>

using std::size_t;
using std::string;
using std::vector;

namespace homforge
{
    namespace
    {
        auto selection_arity(const TupleSet & selection, const Structure & instance) -> size_t
        {
            if (selection.empty())
                throw InvalidInput{"the selected relation must be nonempty"};
            auto k = selection.begin()->size();
            if (k < 1)
                throw InvalidInput{"selected tuples must have at least one element"};
            for (auto & t : selection) {
                if (t.size() != k)
                    throw InvalidInput{"selected tuples differ in length"};
                for (auto e : t)
                    if (e >= instance.size())
                        throw InvalidInput{"selected tuple leaves the domain"};
            }
            return k;
        }
    }

    auto pointed_product(const Structure & instance, const TupleSet & selection, size_t guard) -> PointedStructure
    {
        auto k = selection_arity(selection, instance);
        vector<Structure> copies(selection.size(), instance);
        auto p = product(copies, guard);

        ProductIndexer indexer{copies};
        Tuple distinguished;
        for (size_t j = 0; j < k; ++j) {
            vector<Element> components;
            for (auto & t : selection)
                components.push_back(t[j]);
            distinguished.push_back(indexer.element(components));
        }
        return PointedStructure{std::move(p), std::move(distinguished)};
    }

    auto decide_cq_definability(const Structure & instance, const TupleSet & selection, const SolverConfig & config)
        -> DefinabilityVerdict
    {
        auto pointed = pointed_product(instance, selection, config.product_guard);
        auto images = image_witnesses(pointed, instance, config);

        for (auto & [tuple, hom] : images)
            if (! selection.contains(tuple))
                return NotDefinable{tuple, hom, std::move(pointed)};

        return Definable{canonical_query(pointed)};
    }

    auto reduce_php_to_nondefinability(const PhpInstance & instance) -> DefinabilityReduction
    {
        instance.validate();
        if (! is_digraph(instance.target))
            throw InvalidInput{"expected a single binary relation, got " + instance.target.signature().to_string()};

        vector<Structure> parts = instance.factors;
        parts.push_back(instance.target);

        size_t r = 0;
        for (size_t p = 0; p < parts.size(); ++p) {
            auto length = longest_path_length(parts[p]);
            if (! length)
                throw InvalidInput{"structure " + std::to_string(p + 1) + " has a directed cycle"};
            if (p > 0 && *length != r)
                throw InvalidInput{"longest path lengths differ: " + std::to_string(r) + " and "
                    + std::to_string(*length)};
            r = *length;
        }

        auto joined = disjoint_union(parts);
        auto names = joined.names();
        auto edges = joined.relations();

        auto n = instance.factors.size();
        vector<Element> apexes;
        Element offset = 0;
        for (size_t p = 0; p < parts.size(); ++p) {
            Element apex = names.size();
            names.push_back(p < n ? "a" + std::to_string(p + 1) : string{"b"});
            apexes.push_back(apex);
            for (Element x = 0; x < parts[p].size(); ++x)
                edges[0].push_back(Tuple{apex, offset + x});
            offset += parts[p].size();
        }

        TupleSet selection;
        for (size_t i = 0; i < n; ++i)
            selection.insert(Tuple{apexes[i]});

        return DefinabilityReduction{
            Structure{joined.signature(), std::move(names), std::move(edges)}, std::move(selection), std::move(apexes), r};
    }

    auto apex_path_audit(const DefinabilityReduction & reduction) -> bool
    {
        auto lengths = longest_outgoing_paths(reduction.instance);
        if (! lengths)
            return false;
        for (Element e = 0; e < lengths->size(); ++e) {
            bool is_apex = std::find(reduction.apexes.begin(), reduction.apexes.end(), e) != reduction.apexes.end();
            bool long_path = (*lengths)[e] >= reduction.path_length + 1;
            if (is_apex != long_path)
                return false;
        }
        return true;
    }
}
