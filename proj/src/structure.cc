#include <homforge/errors.hh>
#include <homforge/homomorphism.hh>
#include <homforge/structure.hh>

#include <algorithm>
#include <limits>

using std::nullopt;
using std::optional;
using std::span;
using std::string;
using std::string_view;
using std::vector;

namespace homforge
{
    Signature::Signature(vector<RelationSymbol> relations) :
        _relations(std::move(relations))
    {
        std::sort(_relations.begin(), _relations.end());
        for (std::size_t i = 0; i < _relations.size(); ++i) {
            if (_relations[i].name.empty())
                throw InvalidInput{"relation names must be nonempty"};
            if (_relations[i].arity < 1)
                throw InvalidInput{"relation '" + _relations[i].name + "' has arity 0"};
            if (i > 0 && _relations[i].name == _relations[i - 1].name)
                throw InvalidInput{"duplicate relation name '" + _relations[i].name + "'"};
        }
    }

    auto Signature::find(string_view name) const -> optional<std::size_t>
    {
        auto it = std::lower_bound(_relations.begin(), _relations.end(), name,
            [](const RelationSymbol & r, string_view n) { return r.name < n; });
        if (it == _relations.end() || it->name != name)
            return nullopt;
        return it - _relations.begin();
    }

    auto Signature::index_of(string_view name) const -> std::size_t
    {
        if (auto i = find(name))
            return *i;
        throw InvalidInput{"unknown relation '" + string{name} + "'"};
    }

    auto Signature::to_string() const -> string
    {
        string result = "{";
        for (auto & r : _relations) {
            if (result.size() > 1)
                result += ", ";
            result += r.name + "/" + std::to_string(r.arity);
        }
        return result + "}";
    }

    Structure::Structure(Signature signature, vector<string> domain, vector<vector<Tuple>> relations) :
        _signature(std::move(signature)),
        _names(std::move(domain)),
        _relations(std::move(relations))
    {
        if (_names.size() > std::numeric_limits<Element>::max())
            throw InvalidInput{"domain too large"};

        _index.reserve(_names.size());
        for (std::size_t i = 0; i < _names.size(); ++i) {
            if (_names[i].empty())
                throw InvalidInput{"element identifiers must be nonempty"};
            if (! _index.emplace(_names[i], Element(i)).second)
                throw InvalidInput{"duplicate element identifier '" + _names[i] + "'"};
        }

        if (_relations.size() != _signature.size())
            throw InvalidInput{"expected " + std::to_string(_signature.size()) + " relation interpretations, got "
                + std::to_string(_relations.size())};

        for (std::size_t r = 0; r < _relations.size(); ++r) {
            auto & tuples = _relations[r];
            for (auto & t : tuples) {
                if (t.size() != _signature[r].arity)
                    throw InvalidInput{"tuple of length " + std::to_string(t.size()) + " in relation '"
                        + _signature[r].name + "' of arity " + std::to_string(_signature[r].arity)};
                for (auto e : t)
                    if (e >= _names.size())
                        throw InvalidInput{"tuple in relation '" + _signature[r].name + "' leaves the domain"};
            }
            std::sort(tuples.begin(), tuples.end());
            tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
        }
    }

    auto Structure::find(string_view name) const -> optional<Element>
    {
        auto it = _index.find(string{name});
        if (it == _index.end())
            return nullopt;
        return it->second;
    }

    auto Structure::element(string_view name) const -> Element
    {
        if (auto e = find(name))
            return *e;
        throw InvalidInput{"unknown element '" + string{name} + "'"};
    }

    auto Structure::relation(string_view name) const -> const vector<Tuple> &
    {
        return _relations[_signature.index_of(name)];
    }

    auto Structure::contains(std::size_t relation, span<const Element> tuple) const -> bool
    {
        auto & tuples = _relations[relation];
        auto it = std::lower_bound(tuples.begin(), tuples.end(), tuple,
            [](const Tuple & a, span<const Element> b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); });
        return it != tuples.end() && std::equal(it->begin(), it->end(), tuple.begin(), tuple.end());
    }

    auto Structure::tuple_count() const -> std::size_t
    {
        std::size_t result = 0;
        for (auto & r : _relations)
            result += r.size();
        return result;
    }

    auto Structure::tuple_of(span<const string> names) const -> Tuple
    {
        Tuple result;
        result.reserve(names.size());
        for (auto & n : names)
            result.push_back(element(n));
        return result;
    }

    auto Structure::names_of(span<const Element> tuple) const -> vector<string>
    {
        vector<string> result;
        result.reserve(tuple.size());
        for (auto e : tuple)
            result.push_back(_names[e]);
        return result;
    }

    auto same_structure(const Structure & a, const Structure & b) -> bool
    {
        if (a.signature() != b.signature() || a.size() != b.size())
            return false;

        auto sorted_names = [](const Structure & s) {
            auto n = s.names();
            std::sort(n.begin(), n.end());
            return n;
        };
        if (sorted_names(a) != sorted_names(b))
            return false;

        for (std::size_t r = 0; r < a.signature().size(); ++r) {
            if (a.relation(r).size() != b.relation(r).size())
                return false;
            for (auto & t : a.relation(r)) {
                Tuple translated;
                for (auto e : t)
                    translated.push_back(b.element(a.name(e)));
                if (! b.contains(r, translated))
                    return false;
            }
        }
        return true;
    }

    StructureBuilder::StructureBuilder(Signature signature) :
        _signature(std::move(signature)),
        _relations(_signature.size())
    {
    }

    auto StructureBuilder::add_element(string name) -> Element
    {
        Element e = _names.size();
        if (! _index.emplace(name, e).second)
            throw InvalidInput{"duplicate element identifier '" + name + "'"};
        _names.push_back(std::move(name));
        return e;
    }

    auto StructureBuilder::add_elements(span<const string> names) -> void
    {
        for (auto & n : names)
            add_element(n);
    }

    auto StructureBuilder::add_tuple(std::size_t relation, Tuple tuple) -> void
    {
        _relations.at(relation).push_back(std::move(tuple));
    }

    auto StructureBuilder::add_tuple(string_view relation, span<const string> names) -> void
    {
        Tuple t;
        for (auto & n : names) {
            auto e = find(n);
            if (! e)
                throw InvalidInput{"unknown element '" + n + "'"};
            t.push_back(*e);
        }
        add_tuple(_signature.index_of(relation), std::move(t));
    }

    auto StructureBuilder::find(string_view name) const -> optional<Element>
    {
        auto it = _index.find(string{name});
        if (it == _index.end())
            return nullopt;
        return it->second;
    }

    auto StructureBuilder::build() && -> Structure
    {
        return Structure{std::move(_signature), std::move(_names), std::move(_relations)};
    }

    PointedStructure::PointedStructure(Structure s, Tuple d) :
        structure(std::move(s)),
        distinguished(std::move(d))
    {
        for (auto e : distinguished)
            if (e >= structure.size())
                throw InvalidInput{"distinguished element outside the domain"};
    }

    auto require_same_signature(const Structure & a, const Structure & b, string_view context) -> void
    {
        if (a.signature() != b.signature())
            throw SignatureMismatch{string{context} + ": signature " + a.signature().to_string() + " differs from "
                + b.signature().to_string()};
    }

    auto require_shared_signature(span<const Structure> structures, string_view context) -> void
    {
        for (auto & s : structures)
            require_same_signature(structures.front(), s, context);
    }

    auto PhpInstance::validate() const -> void
    {
        if (factors.empty())
            throw InvalidInput{"a product homomorphism instance needs at least one factor"};
        require_shared_signature(factors, "factors");
        require_same_signature(factors.front(), target, "target");
    }

    auto Homomorphism::apply(span<const Element> tuple) const -> Tuple
    {
        Tuple result;
        result.reserve(tuple.size());
        for (auto e : tuple)
            result.push_back(image[e]);
        return result;
    }

    auto homomorphism_violation(const Structure & source, const Structure & target, const Homomorphism & h)
        -> optional<string>
    {
        if (source.signature() != target.signature())
            return "signature mismatch";
        if (h.image.size() != source.size())
            return "map covers " + std::to_string(h.image.size()) + " of " + std::to_string(source.size())
                + " source elements";
        for (std::size_t e = 0; e < h.image.size(); ++e)
            if (h.image[e] >= target.size())
                return "element '" + source.name(e) + "' maps outside the target domain";

        for (std::size_t r = 0; r < source.signature().size(); ++r)
            for (auto & t : source.relation(r)) {
                auto image = h.apply(t);
                if (! target.contains(r, image)) {
                    string shown;
                    for (auto e : t)
                        shown += (shown.empty() ? "" : ",") + source.name(e);
                    return "tuple " + source.signature()[r].name + "(" + shown + ") is not preserved";
                }
            }
        return nullopt;
    }

    auto is_homomorphism(const Structure & source, const Structure & target, const Homomorphism & h) -> bool
    {
        return ! homomorphism_violation(source, target, h);
    }

    auto require_homomorphism(const Structure & source, const Structure & target, const Homomorphism & h,
        string_view context) -> void
    {
        if (auto why = homomorphism_violation(source, target, h))
            throw InvalidHomomorphism{string{context} + ": " + *why};
    }

    auto compose(const Homomorphism & first, const Homomorphism & second) -> Homomorphism
    {
        Homomorphism result;
        result.image.reserve(first.image.size());
        for (auto e : first.image)
            result.image.push_back(second.image.at(e));
        return result;
    }

    auto identity_homomorphism(const Structure & s) -> Homomorphism
    {
        Homomorphism result;
        result.image.resize(s.size());
        for (std::size_t e = 0; e < s.size(); ++e)
            result.image[e] = e;
        return result;
    }
}
