#ifndef HOMFORGE_HEADER_HOMOMORPHISM_HH
#define HOMFORGE_HEADER_HOMOMORPHISM_HH 1

#include <homforge/structure.hh>

#include <optional>
#include <string>
#include <vector>

namespace homforge
{
    /// A total map from a source domain to a target domain, indexed by source element.
    struct Homomorphism
    {
        std::vector<Element> image;

        auto operator()(Element e) const -> Element { return image[e]; }
        auto apply(std::span<const Element> tuple) const -> Tuple;

        auto operator<=>(const Homomorphism &) const = default;
    };

    /**
     * Checks the map independently of any search code. Returns a description of
     * the first problem found, or nullopt if the map is a homomorphism.
     */
    auto homomorphism_violation(const Structure & source, const Structure & target, const Homomorphism & h)
        -> std::optional<std::string>;

    auto is_homomorphism(const Structure & source, const Structure & target, const Homomorphism & h) -> bool;

    /// Throws InvalidHomomorphism with the violation as message.
    auto require_homomorphism(const Structure & source, const Structure & target, const Homomorphism & h,
        std::string_view context) -> void;

    /// first then second.
    auto compose(const Homomorphism & first, const Homomorphism & second) -> Homomorphism;

    auto identity_homomorphism(const Structure & s) -> Homomorphism;
}

#endif
