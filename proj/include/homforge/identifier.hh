#ifndef HOMFORGE_HEADER_IDENTIFIER_HH
#define HOMFORGE_HEADER_IDENTIFIER_HH 1

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace homforge
{
    /**
     * Builds the identifier of a composite element, "(c1,c2,...)".
     *
     * Components that are themselves well-bracketed (for instance identifiers of
     * nested products) are embedded verbatim. Any other component containing one
     * of '(', ')', ',' or '\' has those characters backslash-escaped, so that
     * decompose_identifier() always recovers the original components.
     */
    auto compose_identifier(std::span<const std::string> components) -> std::string;

    /// Inverse of compose_identifier(). Throws ParseError if the string is not composite.
    auto decompose_identifier(std::string_view identifier) -> std::vector<std::string>;
}

#endif
