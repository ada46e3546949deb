#ifndef HOMFORGE_HEADER_PRODUCT_HH
#define HOMFORGE_HEADER_PRODUCT_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/structure.hh>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace homforge
{
    inline constexpr std::size_t default_product_guard = 1'000'000;

    /**
     * Mixed-radix addressing of product elements. Element (c_1,...,c_n) of a
     * product has index sum c_i * stride_i with the first factor most
     * significant, so indices enumerate the product in lexicographic order of
     * component positions. This is the domain order of product().
     */
    class ProductIndexer
    {
    public:
        explicit ProductIndexer(std::vector<std::size_t> sizes);
        explicit ProductIndexer(std::span<const Structure> factors);

        auto factor_count() const -> std::size_t { return _sizes.size(); }
        auto size() const -> std::size_t { return _size; }

        auto component(std::size_t element, std::size_t factor) const -> Element
        {
            return Element((element / _strides[factor]) % _sizes[factor]);
        }

        auto components(std::size_t element) const -> std::vector<Element>;

        auto element(std::span<const Element> components) const -> Element;

        auto stride(std::size_t factor) const -> std::size_t { return _strides[factor]; }

    private:
        std::vector<std::size_t> _sizes;
        std::vector<std::size_t> _strides;
        std::size_t _size = 1;
    };

    /// Product of the domain sizes, saturating at SIZE_MAX.
    auto product_cardinality(std::span<const Structure> factors) -> std::size_t;

    /// Throws GuardExceeded if the product domain would exceed the guard.
    auto check_product_guard(std::span<const Structure> factors, std::size_t guard) -> void;

    /**
     * The direct product. Elements are named by compose_identifier() over the
     * component identifiers and ordered as by ProductIndexer. A tuple is in a
     * relation iff every projection is. The guard bounds both the domain and
     * the number of tuples of each relation.
     */
    auto product(std::span<const Structure> factors, std::size_t guard = default_product_guard) -> Structure;

    auto product_element_name(std::span<const Structure> factors, std::span<const Element> components) -> std::string;

    /// The i-th projection, as a map from product(factors) to factors[i].
    auto projection(std::span<const Structure> factors, std::size_t factor) -> Homomorphism;

    /**
     * Disjoint union; each identifier is prefixed with "<part index>:",
     * counting parts from 0. Part i's elements precede part i+1's.
     */
    auto disjoint_union(std::span<const Structure> parts) -> Structure;

    auto disjoint_union_name(std::size_t part, const std::string & name) -> std::string;

    /// Replaces every unary relation P with the binary {(a,a) : a in P}.
    auto binarize_unary(const Structure & s) -> Structure;
}

#endif
