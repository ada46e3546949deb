#include <homforge/errors.hh>
#include <homforge/product.hh>
#include <homforge/tiling.hh>

#include <algorithm>

using nlohmann::json;
using std::nullopt;
using std::optional;
using std::pair;
using std::size_t;
using std::string;
using std::vector;

namespace homforge
{
    auto TileSystem::index_of(const string & tile) const -> TileIndex
    {
        auto it = std::find(tiles.begin(), tiles.end(), tile);
        if (it == tiles.end())
            throw InvalidInput{"unknown tile '" + tile + "'"};
        return it - tiles.begin();
    }

    auto TileSystem::from_json(const json & j) -> TileSystem
    {
        if (! j.is_object() || ! j.contains("tiles") || ! j.contains("hcompat") || ! j.contains("vcompat"))
            throw ParseError{"tile system needs \"tiles\", \"hcompat\" and \"vcompat\""};

        TileSystem system;
        for (auto & t : j.at("tiles")) {
            if (! t.is_string())
                throw ParseError{"tile names must be strings"};
            auto name = t.get<string>();
            if (std::find(system.tiles.begin(), system.tiles.end(), name) != system.tiles.end())
                throw ParseError{"duplicate tile '" + name + "'"};
            system.tiles.push_back(name);
        }

        auto read_pairs = [&](const json & list, const char * what) {
            std::set<pair<TileIndex, TileIndex>> result;
            if (! list.is_array())
                throw ParseError{string{what} + " must be an array of pairs"};
            for (auto & p : list) {
                if (! p.is_array() || p.size() != 2 || ! p[0].is_string() || ! p[1].is_string())
                    throw ParseError{string{what} + " entries must be pairs of tile names"};
                try {
                    result.emplace(system.index_of(p[0].get<string>()), system.index_of(p[1].get<string>()));
                }
                catch (const InvalidInput & e) {
                    throw ParseError{string{what} + ": " + e.what()};
                }
            }
            return result;
        };
        system.hcompat = read_pairs(j.at("hcompat"), "hcompat");
        system.vcompat = read_pairs(j.at("vcompat"), "vcompat");
        return system;
    }

    auto TileSystem::to_json() const -> json
    {
        auto render = [&](const std::set<pair<TileIndex, TileIndex>> & pairs) {
            json result = json::array();
            for (auto & [a, b] : pairs)
                result.push_back({tiles[a], tiles[b]});
            return result;
        };
        return json{{"tiles", tiles}, {"hcompat", render(hcompat)}, {"vcompat", render(vcompat)}};
    }

    TilingInstance::TilingInstance(TileSystem s, vector<TileIndex> p) :
        system(std::move(s)),
        prefix(std::move(p))
    {
        if (prefix.empty())
            throw InvalidInput{"tiling prefix must be nonempty"};
        if (prefix.size() > 30)
            throw InvalidInput{"tiling exponent too large"};
        for (auto t : prefix)
            if (t >= system.tiles.size())
                throw InvalidInput{"prefix uses an undeclared tile"};
    }

    TilingInstance::TilingInstance(TileSystem s, const vector<string> & p) :
        TilingInstance(s, [&] {
            vector<TileIndex> result;
            for (auto & name : p)
                result.push_back(s.index_of(name));
            return result;
        }())
    {
    }

    TilingAssignment::TilingAssignment(size_t exponent, TileIndex fill) :
        _exponent(exponent),
        _cells(width() * width(), fill)
    {
    }

    auto TilingAssignment::to_json(const TileSystem & system) const -> json
    {
        json rows = json::array();
        for (size_t y = 0; y < width(); ++y) {
            json row = json::array();
            for (size_t x = 0; x < width(); ++x)
                row.push_back(system.tiles.at(at(x, y)));
            rows.push_back(row);
        }
        return rows;
    }

    auto tiling_violation(const TilingInstance & instance, const TilingAssignment & a) -> optional<string>
    {
        auto cell = [](size_t x, size_t y) { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; };

        if (a.exponent() != instance.exponent())
            return "assignment covers the wrong grid size";
        auto n = a.width();
        for (size_t y = 0; y < n; ++y)
            for (size_t x = 0; x < n; ++x) {
                if (a.at(x, y) >= instance.system.tiles.size())
                    return "undeclared tile at " + cell(x, y);
                if (x + 1 < n && ! instance.system.hcompat.contains({a.at(x, y), a.at(x + 1, y)}))
                    return "horizontal mismatch at " + cell(x, y);
                if (y + 1 < n && ! instance.system.vcompat.contains({a.at(x, y), a.at(x, y + 1)}))
                    return "vertical mismatch at " + cell(x, y);
            }
        for (size_t k = 0; k < instance.prefix.size(); ++k)
            if (a.at(k, 0) != instance.prefix[k])
                return "prefix tile " + std::to_string(k + 1) + " not at " + cell(k, 0);
        return nullopt;
    }

    auto is_valid_tiling(const TilingInstance & instance, const TilingAssignment & a) -> bool
    {
        return ! tiling_violation(instance, a);
    }

    auto bits(std::uint64_t k, size_t m) -> vector<int>
    {
        if (m < 1 || m > 63 || k >> m)
            throw InvalidInput{std::to_string(k) + " does not fit in " + std::to_string(m) + " bits"};
        vector<int> result(m);
        for (size_t i = 0; i < m; ++i)
            result[i] = (k >> (m - 1 - i)) & 1;
        return result;
    }

    auto brute_force_tiling(const TilingInstance & instance) -> optional<TilingAssignment>
    {
        auto m = instance.exponent();
        if (m > brute_force_max_exponent)
            throw ResourceLimit{"brute force tiling oracle only handles small grids", m, brute_force_max_exponent};

        auto n = instance.width();
        auto & sys = instance.system;
        TilingAssignment a{m};

        // cells in row-major order from (0,0); each cell only checks its left and lower neighbours
        auto fits = [&](size_t x, size_t y, TileIndex t) {
            if (y == 0 && x < instance.prefix.size() && instance.prefix[x] != t)
                return false;
            if (x > 0 && ! sys.hcompat.contains({a.at(x - 1, y), t}))
                return false;
            if (y > 0 && ! sys.vcompat.contains({a.at(x, y - 1), t}))
                return false;
            return true;
        };

        auto place = [&](auto & self, size_t cell) -> bool {
            if (cell == n * n)
                return true;
            auto x = cell % n, y = cell / n;
            for (TileIndex t = 0; t < sys.tiles.size(); ++t)
                if (fits(x, y, t)) {
                    a.set(x, y, t);
                    if (self(self, cell + 1))
                        return true;
                }
            return false;
        };

        if (! place(place, 0))
            return nullopt;
        return a;
    }

    auto bit_pairs(BitRelation r) -> vector<pair<int, int>>
    {
        switch (r) {
        case BitRelation::id: return {{0, 0}, {1, 1}};
        case BitRelation::diff: return {{0, 1}, {1, 0}};
        case BitRelation::s01: return {{0, 1}};
        case BitRelation::s10: return {{1, 0}};
        }
        return {};
    }

    namespace
    {
        auto coordinate_piece(EncodingMode mode, size_t k, size_t position) -> BitRelation
        {
            // position is 1-based within one coordinate's m bits
            if (position < k)
                return BitRelation::id;
            if (mode == EncodingMode::paper_literal)
                return BitRelation::diff;
            return position == k ? BitRelation::s01 : BitRelation::s10;
        }

        auto check_piece_range(size_t k, size_t factor, size_t m) -> void
        {
            if (k < 1 || k > m || factor < 1 || factor > 2 * m)
                throw InvalidInput{"piece index out of range"};
        }
    }

    auto horizontal_piece(EncodingMode mode, size_t k, size_t factor, size_t m) -> BitRelation
    {
        check_piece_range(k, factor, m);
        if (factor > m)
            return BitRelation::id;
        return coordinate_piece(mode, k, factor);
    }

    auto vertical_piece(EncodingMode mode, size_t k, size_t factor, size_t m) -> BitRelation
    {
        check_piece_range(k, factor, m);
        if (factor <= m)
            return BitRelation::id;
        return coordinate_piece(mode, k, factor - m);
    }

    auto horizontal_name(size_t k) -> string { return "H" + std::to_string(k); }
    auto vertical_name(size_t k) -> string { return "V" + std::to_string(k); }
    auto prefix_name(size_t k) -> string { return "P" + std::to_string(k); }

    namespace
    {
        auto tiling_signature(size_t m) -> Signature
        {
            vector<RelationSymbol> symbols;
            for (size_t k = 1; k <= m; ++k) {
                symbols.push_back({horizontal_name(k), 2});
                symbols.push_back({vertical_name(k), 2});
                symbols.push_back({prefix_name(k), 1});
            }
            return Signature{std::move(symbols)};
        }
    }

    auto encode_tiling_php(const TilingInstance & instance, EncodingMode mode) -> PhpInstance
    {
        auto m = instance.exponent();
        auto signature = tiling_signature(m);

        PhpInstance result;
        for (size_t factor = 1; factor <= 2 * m; ++factor) {
            vector<vector<Tuple>> relations(signature.size());
            auto put = [&](const string & name, BitRelation r) {
                for (auto [a, b] : bit_pairs(r))
                    relations[signature.index_of(name)].push_back(Tuple{Element(a), Element(b)});
            };
            for (size_t k = 1; k <= m; ++k) {
                put(horizontal_name(k), horizontal_piece(mode, k, factor, m));
                put(vertical_name(k), vertical_piece(mode, k, factor, m));
                int bit = factor <= m ? bits(k - 1, m)[factor - 1] : 0;
                relations[signature.index_of(prefix_name(k))].push_back(Tuple{Element(bit)});
            }
            result.factors.emplace_back(signature, vector<string>{"0", "1"}, std::move(relations));
        }

        auto & sys = instance.system;
        vector<vector<Tuple>> relations(signature.size());
        for (size_t k = 1; k <= m; ++k) {
            for (auto & [a, b] : sys.hcompat)
                relations[signature.index_of(horizontal_name(k))].push_back(Tuple{Element(a), Element(b)});
            for (auto & [a, b] : sys.vcompat)
                relations[signature.index_of(vertical_name(k))].push_back(Tuple{Element(a), Element(b)});
            relations[signature.index_of(prefix_name(k))].push_back(Tuple{Element(instance.prefix[k - 1])});
        }
        result.target = Structure{signature, sys.tiles, std::move(relations)};
        return result;
    }

    auto grid_element(size_t x, size_t y, size_t m) -> Element
    {
        return Element((x << m) | y);
    }

    auto decode_hom_to_tiling(const Homomorphism & h, const TilingInstance & instance, EncodingMode mode)
        -> TilingAssignment
    {
        auto encoded = encode_tiling_php(instance, mode);
        auto p = product(encoded.factors);
        require_homomorphism(p, encoded.target, h, "tiling decode");

        auto m = instance.exponent();
        TilingAssignment result{m};
        for (size_t y = 0; y < result.width(); ++y)
            for (size_t x = 0; x < result.width(); ++x)
                result.set(x, y, h(grid_element(x, y, m)));
        return result;
    }
}
