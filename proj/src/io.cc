#include <homforge/errors.hh>
#include <homforge/io.hh>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;
using std::set;
using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace homforge
{
    namespace
    {
        auto as_string(const json & j, string_view what) -> string
        {
            if (! j.is_string())
                throw ParseError{string{what} + " must be a string, got " + j.dump()};
            return j.get<string>();
        }

        auto as_array(const json & j, string_view what) -> const json &
        {
            if (! j.is_array())
                throw ParseError{string{what} + " must be an array"};
            return j;
        }

        auto lexicographic_names(const Structure & s, const Tuple & a, const Tuple & b) -> bool
        {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                [&](Element x, Element y) { return s.name(x) < s.name(y); });
        }
    }

    auto structure_from_json(const json & j) -> Structure
    {
        if (! j.is_object())
            throw ParseError{"structure must be a JSON object"};
        for (auto & [key, value] : j.items())
            if (key != "domain" && key != "relations")
                throw ParseError{"unexpected key '" + key + "' in structure"};
        if (! j.contains("domain") || ! j.contains("relations"))
            throw ParseError{"structure needs \"domain\" and \"relations\""};

        vector<string> domain;
        for (auto & e : as_array(j.at("domain"), "domain"))
            domain.push_back(as_string(e, "element identifier"));

        auto & rels = j.at("relations");
        if (! rels.is_object())
            throw ParseError{"\"relations\" must be an object"};

        vector<RelationSymbol> symbols;
        for (auto & [name, body] : rels.items()) {
            if (! body.is_object() || ! body.contains("arity") || ! body.contains("tuples"))
                throw ParseError{"relation '" + name + "' needs \"arity\" and \"tuples\""};
            auto & arity = body.at("arity");
            if (! arity.is_number_integer() || arity.get<long long>() < 1)
                throw ParseError{"relation '" + name + "' must have a positive integer arity"};
            symbols.push_back({name, arity.get<size_t>()});
        }

        Signature signature;
        try {
            signature = Signature{symbols};
        }
        catch (const InvalidInput & e) {
            throw ParseError{e.what()};
        }

        StructureBuilder builder{signature};
        try {
            builder.add_elements(domain);
        }
        catch (const InvalidInput & e) {
            throw ParseError{e.what()};
        }

        for (auto & [name, body] : rels.items()) {
            auto r = signature.index_of(name);
            set<Tuple> seen;
            for (auto & t : as_array(body.at("tuples"), "tuples of '" + name + "'")) {
                if (! t.is_array() || t.size() != signature[r].arity)
                    throw ParseError{"tuple " + t.dump() + " of relation '" + name + "' does not have arity "
                        + std::to_string(signature[r].arity)};
                Tuple tuple;
                for (auto & e : t) {
                    auto id = as_string(e, "tuple component");
                    auto element = builder.find(id);
                    if (! element)
                        throw ParseError{"tuple " + t.dump() + " of relation '" + name + "' uses unknown element '"
                            + id + "'"};
                    tuple.push_back(*element);
                }
                if (! seen.insert(tuple).second)
                    throw ParseError{"duplicate tuple " + t.dump() + " in relation '" + name + "'"};
                builder.add_tuple(r, std::move(tuple));
            }
        }

        try {
            return std::move(builder).build();
        }
        catch (const InvalidInput & e) {
            throw ParseError{e.what()};
        }
    }

    auto structure_to_json(const Structure & s) -> json
    {
        auto domain = s.names();
        std::sort(domain.begin(), domain.end());

        json relations = json::object();
        for (size_t r = 0; r < s.signature().size(); ++r) {
            auto tuples = s.relation(r);
            std::sort(tuples.begin(), tuples.end(),
                [&](const Tuple & a, const Tuple & b) { return lexicographic_names(s, a, b); });
            json rendered = json::array();
            for (auto & t : tuples)
                rendered.push_back(s.names_of(t));
            relations[s.signature()[r].name] = json{{"arity", s.signature()[r].arity}, {"tuples", rendered}};
        }

        return json{{"domain", domain}, {"relations", relations}};
    }

    auto parse_structure(string_view text) -> Structure
    {
        json j;
        try {
            j = json::parse(text);
        }
        catch (const json::parse_error & e) {
            throw ParseError{string{"invalid JSON: "} + e.what()};
        }
        return structure_from_json(j);
    }

    auto serialize_structure(const Structure & s) -> string
    {
        return structure_to_json(s).dump() + "\n";
    }

    auto read_json_file(const std::filesystem::path & path) -> json
    {
        std::ifstream in{path};
        if (! in)
            throw ParseError{"cannot open '" + path.string() + "'"};
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            return json::parse(buffer.str());
        }
        catch (const json::parse_error & e) {
            throw ParseError{"invalid JSON in '" + path.string() + "': " + e.what()};
        }
    }

    auto write_text_file(const std::filesystem::path & path, string_view text) -> void
    {
        std::ofstream out{path, std::ios::binary};
        if (! out)
            throw ParseError{"cannot write '" + path.string() + "'"};
        out << text;
    }

    auto read_structure_file(const std::filesystem::path & path) -> Structure
    {
        try {
            return structure_from_json(read_json_file(path));
        }
        catch (const ParseError & e) {
            throw ParseError{path.string() + ": " + e.what()};
        }
    }

    auto write_structure_file(const std::filesystem::path & path, const Structure & s) -> void
    {
        write_text_file(path, serialize_structure(s));
    }

    auto tuple_set_from_json(const json & j, const Structure & s) -> TupleSet
    {
        TupleSet result;
        std::optional<size_t> arity;
        for (auto & t : as_array(j, "relation")) {
            if (! t.is_array())
                throw ParseError{"relation entries must be arrays of identifiers"};
            if (arity && *arity != t.size())
                throw ParseError{"relation mixes tuples of different lengths"};
            arity = t.size();
            Tuple tuple;
            for (auto & e : t) {
                auto id = as_string(e, "tuple component");
                auto element = s.find(id);
                if (! element)
                    throw ParseError{"relation uses unknown element '" + id + "'"};
                tuple.push_back(*element);
            }
            if (! result.insert(std::move(tuple)).second)
                throw ParseError{"duplicate tuple " + t.dump() + " in relation"};
        }
        return result;
    }

    auto tuple_set_to_json(const TupleSet & tuples, const Structure & s) -> json
    {
        vector<Tuple> sorted(tuples.begin(), tuples.end());
        std::sort(sorted.begin(), sorted.end(),
            [&](const Tuple & a, const Tuple & b) { return lexicographic_names(s, a, b); });
        json result = json::array();
        for (auto & t : sorted)
            result.push_back(s.names_of(t));
        return result;
    }

    auto homomorphism_to_json(const Homomorphism & h, const Structure & source, const Structure & target) -> json
    {
        json result = json::object();
        for (size_t e = 0; e < h.image.size(); ++e)
            result[source.name(e)] = target.name(h.image[e]);
        return result;
    }

    auto homomorphism_from_json(const json & j, const Structure & source, const Structure & target) -> Homomorphism
    {
        if (! j.is_object())
            throw ParseError{"homomorphism must be a JSON object"};
        Homomorphism h;
        h.image.resize(source.size());
        vector<bool> seen(source.size(), false);
        for (auto & [from, to] : j.items()) {
            auto e = source.find(from);
            if (! e)
                throw ParseError{"homomorphism maps unknown element '" + from + "'"};
            auto t = target.find(as_string(to, "image"));
            if (! t)
                throw ParseError{"homomorphism maps '" + from + "' to unknown element"};
            h.image[*e] = *t;
            seen[*e] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw ParseError{"homomorphism is not total"};
        return h;
    }
}
