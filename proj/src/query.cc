#include <homforge/errors.hh>
#include <homforge/query.hh>

#include <algorithm>
#include <set>

using nlohmann::json;
using std::set;
using std::size_t;
using std::string;
using std::vector;

namespace homforge
{
    auto check_query(const ConjunctiveQuery & q, const Signature & signature) -> void
    {
        set<string> free(q.free.begin(), q.free.end()), bound;
        for (auto & v : q.bound) {
            if (free.contains(v))
                throw InvalidInput{"variable '" + v + "' is both free and bound"};
            if (! bound.insert(v).second)
                throw InvalidInput{"bound variable '" + v + "' declared twice"};
        }

        set<string> used;
        for (auto & a : q.atoms) {
            auto r = signature.find(a.relation);
            if (! r)
                throw InvalidInput{"atom uses unknown relation '" + a.relation + "'"};
            if (a.arguments.size() != signature[*r].arity)
                throw InvalidInput{"atom over '" + a.relation + "' has " + std::to_string(a.arguments.size())
                    + " arguments, expected " + std::to_string(signature[*r].arity)};
            for (auto & v : a.arguments) {
                if (! free.contains(v) && ! bound.contains(v))
                    throw InvalidInput{"atom uses undeclared variable '" + v + "'"};
                used.insert(v);
            }
        }

        for (auto & v : q.free)
            if (! used.contains(v))
                throw UnsafeQuery{"free variable '" + v + "' occurs in no atom"};
    }

    auto canonical_structure(const ConjunctiveQuery & q, const Signature & signature) -> PointedStructure
    {
        check_query(q, signature);

        StructureBuilder builder{signature};
        Tuple distinguished;
        for (auto & v : q.free) {
            auto e = builder.find(v);
            distinguished.push_back(e ? *e : builder.add_element(v));
        }
        for (auto & v : q.bound)
            builder.add_element(v);
        for (auto & a : q.atoms)
            builder.add_tuple(a.relation, a.arguments);

        return PointedStructure{std::move(builder).build(), std::move(distinguished)};
    }

    auto canonical_query(const PointedStructure & p) -> ConjunctiveQuery
    {
        auto & s = p.structure;
        ConjunctiveQuery q;

        vector<bool> occurs(s.size(), false), is_free(s.size(), false);
        for (size_t r = 0; r < s.signature().size(); ++r)
            for (auto & t : s.relation(r)) {
                q.atoms.push_back(Atom{s.signature()[r].name, s.names_of(t)});
                for (auto e : t)
                    occurs[e] = true;
            }

        for (auto e : p.distinguished) {
            if (! occurs[e])
                throw UnsafeQuery{"distinguished element '" + s.name(e) + "' occurs in no tuple"};
            q.free.push_back(s.name(e));
            is_free[e] = true;
        }
        for (Element e = 0; e < s.size(); ++e)
            if (! is_free[e])
                q.bound.push_back(s.name(e));

        return q;
    }

    auto evaluate(const ConjunctiveQuery & q, const Structure & s, const SolverConfig & config) -> TupleSet
    {
        auto pointed = canonical_structure(q, s.signature());
        return image_set(pointed, s, config);
    }

    auto path_fan_query(size_t r) -> ConjunctiveQuery
    {
        if (r < 1)
            throw InvalidInput{"path fan query needs r >= 1"};

        auto x = [](size_t i) { return "x" + std::to_string(i); };
        auto y = [](size_t i) { return "y" + std::to_string(i); };

        ConjunctiveQuery q;
        for (size_t i = 1; i <= r; ++i) {
            q.free.push_back(x(i));
            q.bound.push_back(y(i));
        }
        for (size_t i = 1; i <= r; ++i)
            q.atoms.push_back(Atom{"E", {x(i), y(i)}});
        for (size_t i = 1; i < r; ++i)
            q.atoms.push_back(Atom{"E", {y(i), y(i + 1)}});
        return q;
    }

    auto query_to_json(const ConjunctiveQuery & q) -> json
    {
        json atoms = json::array();
        for (auto & a : q.atoms)
            atoms.push_back(json::array({a.relation, a.arguments}));
        return json{{"free", q.free}, {"bound", q.bound}, {"atoms", atoms}};
    }

    auto query_from_json(const json & j) -> ConjunctiveQuery
    {
        auto strings = [](const json & v, const char * what) {
            if (! v.is_array())
                throw ParseError{string{what} + " must be an array of strings"};
            vector<string> result;
            for (auto & s : v) {
                if (! s.is_string())
                    throw ParseError{string{what} + " must be an array of strings"};
                result.push_back(s.get<string>());
            }
            return result;
        };

        if (! j.is_object() || ! j.contains("free") || ! j.contains("atoms"))
            throw ParseError{"query needs \"free\" and \"atoms\""};

        ConjunctiveQuery q;
        q.free = strings(j.at("free"), "free");
        if (j.contains("bound"))
            q.bound = strings(j.at("bound"), "bound");
        if (! j.at("atoms").is_array())
            throw ParseError{"atoms must be an array"};
        for (auto & a : j.at("atoms")) {
            if (! a.is_array() || a.size() != 2 || ! a[0].is_string())
                throw ParseError{"atoms look like [\"E\", [\"x\",\"y\"]]"};
            q.atoms.push_back(Atom{a[0].get<string>(), strings(a[1], "atom arguments")});
        }
        return q;
    }
}
