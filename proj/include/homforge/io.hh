#ifndef HOMFORGE_HEADER_IO_HH
#define HOMFORGE_HEADER_IO_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/structure.hh>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace homforge
{
    /**
     * Structure files look like
     *
     *   {"domain": ["a","b"], "relations": {"E": {"arity": 2, "tuples": [["a","b"]]}}}
     *
     * Tuples must have exactly the declared arity and consist of domain
     * identifiers; duplicate elements and duplicate tuples are rejected.
     */
    auto structure_from_json(const nlohmann::json & j) -> Structure;

    /// Canonical form: domain, relation names and tuples sorted lexicographically by identifier.
    auto structure_to_json(const Structure & s) -> nlohmann::json;

    auto parse_structure(std::string_view text) -> Structure;

    /// Canonical compact serialisation, terminated by a newline.
    auto serialize_structure(const Structure & s) -> std::string;

    auto read_structure_file(const std::filesystem::path & path) -> Structure;
    auto write_structure_file(const std::filesystem::path & path, const Structure & s) -> void;

    /// A JSON array of tuples of identifiers, e.g. [["a"],["c"]]. All tuples must share one arity.
    auto tuple_set_from_json(const nlohmann::json & j, const Structure & s) -> TupleSet;
    auto tuple_set_to_json(const TupleSet & tuples, const Structure & s) -> nlohmann::json;

    /// {"source identifier": "target identifier", ...}
    auto homomorphism_to_json(const Homomorphism & h, const Structure & source, const Structure & target)
        -> nlohmann::json;
    auto homomorphism_from_json(const nlohmann::json & j, const Structure & source, const Structure & target)
        -> Homomorphism;

    auto read_json_file(const std::filesystem::path & path) -> nlohmann::json;
    auto write_text_file(const std::filesystem::path & path, std::string_view text) -> void;
}

#endif
