#include <homforge/errors.hh>
#include <homforge/identifier.hh>
#include <homforge/product.hh>

#include <limits>

using std::size_t;
using std::span;
using std::string;
using std::vector;

namespace homforge
{
    ProductIndexer::ProductIndexer(vector<size_t> sizes) :
        _sizes(std::move(sizes)),
        _strides(_sizes.size())
    {
        for (size_t i = _sizes.size(); i-- > 0;) {
            _strides[i] = _size;
            _size *= _sizes[i];
        }
    }

    ProductIndexer::ProductIndexer(span<const Structure> factors) :
        ProductIndexer([&] {
            vector<size_t> sizes;
            for (auto & f : factors)
                sizes.push_back(f.size());
            return sizes;
        }())
    {
    }

    auto ProductIndexer::components(size_t element) const -> vector<Element>
    {
        vector<Element> result(_sizes.size());
        for (size_t i = 0; i < _sizes.size(); ++i)
            result[i] = component(element, i);
        return result;
    }

    auto ProductIndexer::element(span<const Element> components) const -> Element
    {
        size_t result = 0;
        for (size_t i = 0; i < _sizes.size(); ++i)
            result += components[i] * _strides[i];
        return Element(result);
    }

    namespace
    {
        auto saturating_product(const vector<size_t> & values) -> size_t
        {
            size_t result = 1;
            for (auto v : values) {
                if (0 == v)
                    return 0;
                if (result > std::numeric_limits<size_t>::max() / v)
                    result = std::numeric_limits<size_t>::max();
                else
                    result *= v;
            }
            return result;
        }
    }

    auto product_cardinality(span<const Structure> factors) -> size_t
    {
        vector<size_t> sizes;
        for (auto & f : factors)
            sizes.push_back(f.size());
        return saturating_product(sizes);
    }

    auto check_product_guard(span<const Structure> factors, size_t guard) -> void
    {
        if (auto n = product_cardinality(factors); n > guard)
            throw GuardExceeded{"product domain too large", n, guard};
    }

    auto product_element_name(span<const Structure> factors, span<const Element> components) -> string
    {
        vector<string> parts;
        parts.reserve(factors.size());
        for (size_t i = 0; i < factors.size(); ++i)
            parts.push_back(factors[i].name(components[i]));
        return compose_identifier(parts);
    }

    auto product(span<const Structure> factors, size_t guard) -> Structure
    {
        if (factors.empty())
            throw InvalidInput{"product of an empty list of structures"};
        require_shared_signature(factors, "product");
        check_product_guard(factors, guard);

        ProductIndexer indexer{factors};
        auto & signature = factors.front().signature();

        vector<string> names;
        names.reserve(indexer.size());
        for (size_t e = 0; e < indexer.size(); ++e)
            names.push_back(product_element_name(factors, indexer.components(e)));

        vector<vector<Tuple>> relations(signature.size());
        for (size_t r = 0; r < signature.size(); ++r) {
            vector<size_t> counts;
            for (auto & f : factors)
                counts.push_back(f.relation(r).size());
            auto total = saturating_product(counts);
            if (total > guard)
                throw GuardExceeded{"product relation '" + signature[r].name + "' too large", total, guard};
            if (0 == total)
                continue;

            auto arity = signature[r].arity;
            relations[r].reserve(total);
            vector<size_t> choice(factors.size(), 0);
            while (true) {
                Tuple t(arity, 0);
                for (size_t i = 0; i < factors.size(); ++i) {
                    auto & ft = factors[i].relation(r)[choice[i]];
                    for (size_t q = 0; q < arity; ++q)
                        t[q] += ft[q] * indexer.stride(i);
                }
                relations[r].push_back(std::move(t));

                size_t i = factors.size();
                while (i-- > 0) {
                    if (++choice[i] < counts[i])
                        break;
                    choice[i] = 0;
                }
                if (i == size_t(-1))
                    break;
            }
        }

        return Structure{signature, std::move(names), std::move(relations)};
    }

    auto projection(span<const Structure> factors, size_t factor) -> Homomorphism
    {
        ProductIndexer indexer{factors};
        Homomorphism result;
        result.image.resize(indexer.size());
        for (size_t e = 0; e < indexer.size(); ++e)
            result.image[e] = indexer.component(e, factor);
        return result;
    }

    auto disjoint_union_name(size_t part, const string & name) -> string
    {
        return std::to_string(part) + ":" + name;
    }

    auto disjoint_union(span<const Structure> parts) -> Structure
    {
        if (parts.empty())
            throw InvalidInput{"disjoint union of an empty list of structures"};
        require_shared_signature(parts, "disjoint union");

        auto & signature = parts.front().signature();
        vector<string> names;
        vector<vector<Tuple>> relations(signature.size());
        Element offset = 0;
        for (size_t p = 0; p < parts.size(); ++p) {
            for (auto & n : parts[p].names())
                names.push_back(disjoint_union_name(p, n));
            for (size_t r = 0; r < signature.size(); ++r)
                for (auto t : parts[p].relation(r)) {
                    for (auto & e : t)
                        e += offset;
                    relations[r].push_back(std::move(t));
                }
            offset += parts[p].size();
        }
        return Structure{signature, std::move(names), std::move(relations)};
    }

    auto binarize_unary(const Structure & s) -> Structure
    {
        vector<RelationSymbol> symbols = s.signature().relations();
        vector<vector<Tuple>> relations = s.relations();
        for (size_t r = 0; r < symbols.size(); ++r) {
            if (symbols[r].arity != 1)
                continue;
            symbols[r].arity = 2;
            for (auto & t : relations[r])
                t.push_back(t.front());
        }
        // renaming nothing, so the sorted order of the signature is unchanged
        return Structure{Signature{std::move(symbols)}, s.names(), std::move(relations)};
    }
}
