#ifndef HOMFORGE_HEADER_TILING_HH
#define HOMFORGE_HEADER_TILING_HH 1

#include <homforge/homomorphism.hh>
#include <homforge/structure.hh>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace homforge
{
    using TileIndex = std::size_t;

    /// Tile types with horizontal (left, right) and vertical (lower, upper) compatibility.
    struct TileSystem
    {
        std::vector<std::string> tiles;
        std::set<std::pair<TileIndex, TileIndex>> hcompat;
        std::set<std::pair<TileIndex, TileIndex>> vcompat;

        auto index_of(const std::string & tile) const -> TileIndex;

        /// {"tiles": ["t","u"], "hcompat": [["t","u"]], "vcompat": [["t","t"]]}
        static auto from_json(const nlohmann::json & j) -> TileSystem;
        auto to_json() const -> nlohmann::json;
    };

    /// Tile the 2^m by 2^m grid, with the m prefix tiles at (0,0), ..., (m-1,0).
    struct TilingInstance
    {
        TileSystem system;
        std::vector<TileIndex> prefix;

        TilingInstance(TileSystem s, std::vector<TileIndex> prefix);
        TilingInstance(TileSystem s, const std::vector<std::string> & prefix);

        auto exponent() const -> std::size_t { return prefix.size(); }
        auto width() const -> std::size_t { return std::size_t(1) << prefix.size(); }
    };

    class TilingAssignment
    {
    public:
        explicit TilingAssignment(std::size_t exponent, TileIndex fill = 0);

        auto exponent() const -> std::size_t { return _exponent; }
        auto width() const -> std::size_t { return std::size_t(1) << _exponent; }

        auto at(std::size_t x, std::size_t y) const -> TileIndex { return _cells[y * width() + x]; }
        auto set(std::size_t x, std::size_t y, TileIndex t) -> void { _cells[y * width() + x] = t; }

        auto operator==(const TilingAssignment &) const -> bool = default;

        /// Rows from y = 0 upwards, as tile names.
        auto to_json(const TileSystem & system) const -> nlohmann::json;

    private:
        std::size_t _exponent;
        std::vector<TileIndex> _cells;
    };

    auto tiling_violation(const TilingInstance & instance, const TilingAssignment & assignment)
        -> std::optional<std::string>;

    auto is_valid_tiling(const TilingInstance & instance, const TilingAssignment & assignment) -> bool;

    /// Most significant bit first: bits(k, m)[0] is the 2^(m-1) bit.
    auto bits(std::uint64_t k, std::size_t m) -> std::vector<int>;

    inline constexpr std::size_t brute_force_max_exponent = 3;

    /// Exhaustive backtracking over cells. Throws ResourceLimit for m above brute_force_max_exponent.
    auto brute_force_tiling(const TilingInstance & instance) -> std::optional<TilingAssignment>;

    /// Per-bit binary relations over {0,1}.
    enum class BitRelation
    {
        id,
        diff,
        s01,
        s10
    };

    auto bit_pairs(BitRelation r) -> std::vector<std::pair<int, int>>;

    enum class EncodingMode
    {
        exact,
        paper_literal
    };

    /**
     * Per-factor interpretation of the successor pieces. For k in [1,m] and
     * factor ell in [1,2m], H_k uses diff on [k,m] in paper-literal mode; exact
     * mode uses s01 at ell = k and s10 on (k,m], which realises exactly the
     * pairs where bit k is the lowest-order zero of x. V_k is the same shifted
     * by m.
     */
    auto horizontal_piece(EncodingMode mode, std::size_t k, std::size_t factor, std::size_t m) -> BitRelation;
    auto vertical_piece(EncodingMode mode, std::size_t k, std::size_t factor, std::size_t m) -> BitRelation;

    auto horizontal_name(std::size_t k) -> std::string;
    auto vertical_name(std::size_t k) -> std::string;
    auto prefix_name(std::size_t k) -> std::string;

    /**
     * 2m factors over {0,1}, relations H1..Hm, V1..Vm (binary) and P1..Pm
     * (unary, P_k fixing grid position (k-1, 0)). Element x*2^m + y of the
     * product is the grid cell (x, y).
     */
    auto encode_tiling_php(const TilingInstance & instance, EncodingMode mode = EncodingMode::exact) -> PhpInstance;

    /// Product element of cell (x, y) in the encoded product.
    auto grid_element(std::size_t x, std::size_t y, std::size_t m) -> Element;

    /// Reads the tiling off a homomorphism; throws InvalidHomomorphism if h does not validate.
    auto decode_hom_to_tiling(const Homomorphism & h, const TilingInstance & instance,
        EncodingMode mode = EncodingMode::exact) -> TilingAssignment;
}

#endif
