#include "support/test_support.hh"

#include <homforge/definability.hh>
#include <homforge/digraph.hh>
#include <homforge/errors.hh>
#include <homforge/identifier.hh>
#include <homforge/io.hh>
#include <homforge/normalform.hh>
#include <homforge/product.hh>
#include <homforge/query.hh>
#include <homforge/solver.hh>
#include <homforge/tiling.hh>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace homforge;
using namespace homforge::test;

using std::pair;
using std::set;
using std::string;
using std::vector;

namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass = true;
        string detail;
    };

    // collects failures without stopping, so the detail names the first one
    struct Tally
    {
        size_t cases = 0;
        size_t failures = 0;
        string first_failure;

        auto expect(bool ok, const string & what) -> void
        {
            ++cases;
            if (! ok && failures++ == 0)
                first_failure = what;
        }

        auto outcome(const string & summary) const -> Outcome
        {
            if (failures == 0)
                return {true, summary};
            return {false, summary + "; " + std::to_string(failures) + " failed, first: " + first_failure};
        }
    };

    using Clock = std::chrono::steady_clock;

    auto seconds_since(Clock::time_point start) -> double
    {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    auto fmt(double s) -> string
    {
        std::ostringstream o;
        o.precision(2);
        o << std::fixed << s << "s";
        return o.str();
    }

    auto criterion_solver() -> Outcome
    {
        auto start = Clock::now();
        std::mt19937_64 rng{1001};
        Tally t;
        size_t yes = 0;
        for (int round = 0; round < 600; ++round) {
            auto sig = random_signature(rng, 2, 2);
            auto a = random_structure(rng, sig, uniform(rng, 1, 4), 0.3);
            auto b = random_structure(rng, sig, uniform(rng, 1, 4), 0.5);
            auto expected = brute_force_exists(a, b);
            auto found = find_homomorphism(a, b);
            t.expect(found.has_value() == expected, "instance " + std::to_string(round) + " disagrees");
            if (found) {
                t.expect(is_homomorphism(a, b, *found), "instance " + std::to_string(round) + " invalid witness");
                ++yes;
            }
        }
        auto elapsed = seconds_since(start);
        t.expect(elapsed < 60, "runtime " + fmt(elapsed));
        return t.outcome("600 instances, " + std::to_string(yes) + " YES, " + fmt(elapsed));
    }

    auto criterion_product() -> Outcome
    {
        std::mt19937_64 rng{1002};
        Tally t;
        for (int round = 0; round < 150; ++round) {
            auto sig = random_signature(rng, 2, 3);
            vector<Structure> factors;
            size_t expected = 1;
            for (size_t i = 0, n = uniform(rng, 1, 3); i < n; ++i) {
                factors.push_back(random_structure(rng, sig, uniform(rng, 0, 4), 0.3));
                expected *= factors.back().size();
            }
            auto p = product(factors);
            t.expect(p.size() == expected, "cardinality in list " + std::to_string(round));
            for (size_t i = 0; i < factors.size(); ++i)
                t.expect(is_homomorphism(p, factors[i], projection(factors, i)),
                    "projection " + std::to_string(i) + " in list " + std::to_string(round));
        }
        return t.outcome("150 factor lists");
    }

    auto tile_system(vector<string> tiles, vector<pair<string, string>> h, vector<pair<string, string>> v) -> TileSystem
    {
        TileSystem s;
        s.tiles = std::move(tiles);
        for (auto & [a, b] : h)
            s.hcompat.emplace(s.index_of(a), s.index_of(b));
        for (auto & [a, b] : v)
            s.vcompat.emplace(s.index_of(a), s.index_of(b));
        return s;
    }

    // number of valid tilings and the tiles they use, by cell-by-cell backtracking
    auto count_tilings(const TilingInstance & inst) -> pair<size_t, set<TileIndex>>
    {
        auto w = inst.width();
        vector<TileIndex> cells(w * w, 0);
        size_t count = 0;
        set<TileIndex> used;
        std::function<void(size_t)> fill = [&](size_t cell) {
            if (cell == cells.size()) {
                ++count;
                used.insert(cells.begin(), cells.end());
                return;
            }
            auto x = cell % w, y = cell / w;
            for (TileIndex tile = 0; tile < inst.system.tiles.size(); ++tile) {
                if (y == 0 && x < inst.prefix.size() && inst.prefix[x] != tile)
                    continue;
                if (x > 0 && ! inst.system.hcompat.contains({cells[cell - 1], tile}))
                    continue;
                if (y > 0 && ! inst.system.vcompat.contains({cells[cell - w], tile}))
                    continue;
                cells[cell] = tile;
                fill(cell + 1);
            }
        };
        fill(0);
        return {count, used};
    }

    auto criterion_tiling() -> Outcome
    {
        Tally t;
        struct Case
        {
            string name;
            TilingInstance inst;
        };
        auto constant = tile_system({"t"}, {{"t", "t"}}, {{"t", "t"}});
        auto no_row = tile_system({"t"}, {}, {{"t", "t"}});
        auto board = tile_system({"w", "b"}, {{"w", "b"}, {"b", "w"}}, {{"w", "b"}, {"b", "w"}});
        auto stripes = tile_system({"r", "g", "x"}, {{"r", "r"}, {"g", "g"}, {"x", "r"}}, {{"r", "g"}, {"g", "r"}});
        auto corner = tile_system({"c", "h", "v", "i"}, {{"c", "h"}, {"h", "h"}, {"v", "i"}, {"i", "i"}},
            {{"c", "v"}, {"v", "v"}, {"h", "i"}, {"i", "i"}});

        vector<Case> cases;
        for (size_t m : {1, 2}) {
            auto tag = " m=" + std::to_string(m);
            cases.push_back({"constant" + tag, TilingInstance{constant, vector<string>(m, "t")}});
            cases.push_back({"no-row" + tag, TilingInstance{no_row, vector<string>(m, "t")}});
            vector<string> alternating{"w", "b"};
            alternating.resize(m);
            cases.push_back({"checkerboard" + tag, TilingInstance{board, alternating}});
            if (m == 2)
                cases.push_back({"checkerboard-bad-prefix" + tag, TilingInstance{board, vector<string>{"w", "w"}}});
            cases.push_back({"stripes" + tag, TilingInstance{stripes, vector<string>(m, "r")}});
            vector<string> corner_prefix{"c", "h"};
            corner_prefix.resize(m);
            cases.push_back({"corner" + tag, TilingInstance{corner, corner_prefix}});
        }

        size_t none = 0, forced = 0;
        double slowest = 0;
        for (auto & c : cases) {
            auto start = Clock::now();
            auto expected = brute_force_tiling(c.inst);
            auto verdict = decide_php(encode_tiling_php(c.inst, EncodingMode::exact));
            auto elapsed = seconds_since(start);
            slowest = std::max(slowest, elapsed);
            t.expect(verdict.holds == expected.has_value(), c.name + " disagrees");
            t.expect(elapsed < 60, c.name + " took " + fmt(elapsed));
            if (verdict.holds)
                t.expect(is_valid_tiling(c.inst, decode_hom_to_tiling(*verdict.witness, c.inst)),
                    c.name + " decodes to an invalid tiling");
            auto [count, used] = count_tilings(c.inst);
            t.expect((count > 0) == expected.has_value(), c.name + " oracle mismatch");
            none += count == 0;
            forced += count == 1 && used.size() > 1;
        }

        std::mt19937_64 rng{1003};
        size_t random_cases = 0;
        for (int round = 0; round < 40; ++round) {
            TileSystem s;
            size_t tiles = uniform(rng, 1, 3);
            for (size_t i = 0; i < tiles; ++i)
                s.tiles.push_back("t" + std::to_string(i));
            for (size_t a = 0; a < tiles; ++a)
                for (size_t b = 0; b < tiles; ++b) {
                    if (uniform(rng, 0, 2))
                        s.hcompat.emplace(a, b);
                    if (uniform(rng, 0, 2))
                        s.vcompat.emplace(a, b);
                }
            size_t m = uniform(rng, 1, 2);
            vector<TileIndex> prefix;
            for (size_t i = 0; i < m; ++i)
                prefix.push_back(uniform(rng, 0, tiles - 1));
            TilingInstance inst{s, prefix};
            auto start = Clock::now();
            auto expected = brute_force_tiling(inst);
            auto verdict = decide_php(encode_tiling_php(inst, EncodingMode::exact));
            auto elapsed = seconds_since(start);
            slowest = std::max(slowest, elapsed);
            t.expect(verdict.holds == expected.has_value(), "random system " + std::to_string(round) + " disagrees");
            t.expect(elapsed < 60, "random system " + std::to_string(round) + " took " + fmt(elapsed));
            ++random_cases;
        }
        t.expect(none >= 1, "no named case without a tiling");
        t.expect(forced >= 1, "no named case with a forced non-constant tiling");
        return t.outcome(std::to_string(cases.size()) + " named cases (" + std::to_string(none) + " untileable, "
            + std::to_string(forced) + " forced non-constant), " + std::to_string(random_cases)
            + " random systems, slowest " + fmt(slowest));
    }

    using CellPairs = set<pair<pair<size_t, size_t>, pair<size_t, size_t>>>;

    auto realised(const Structure & p, const string & relation, size_t m) -> CellPairs
    {
        auto coordinates = [&](const string & name) {
            auto parts = decompose_identifier(name);
            size_t x = 0, y = 0;
            for (size_t i = 0; i < m; ++i) {
                x = 2 * x + (parts[i] == "1");
                y = 2 * y + (parts[m + i] == "1");
            }
            return pair{x, y};
        };
        CellPairs result;
        for (auto & t : p.relation(relation))
            result.emplace(coordinates(p.name(t[0])), coordinates(p.name(t[1])));
        return result;
    }

    auto criterion_decomposition() -> Outcome
    {
        Tally t;
        auto constant = tile_system({"t"}, {{"t", "t"}}, {{"t", "t"}});
        for (size_t m = 1; m <= 3; ++m) {
            auto w = size_t(1) << m;
            TilingInstance inst{constant, vector<string>(m, "t")};
            auto exact = product(encode_tiling_php(inst, EncodingMode::exact).factors);
            CellPairs h, v, successor_h, successor_v;
            for (size_t x = 0; x < w; ++x)
                for (size_t y = 0; y < w; ++y) {
                    if (x + 1 < w)
                        successor_h.insert({{x, y}, {x + 1, y}});
                    if (y + 1 < w)
                        successor_v.insert({{x, y}, {x, y + 1}});
                }
            for (size_t k = 1; k <= m; ++k) {
                auto hk = realised(exact, horizontal_name(k), m);
                auto vk = realised(exact, vertical_name(k), m);
                h.insert(hk.begin(), hk.end());
                v.insert(vk.begin(), vk.end());
            }
            t.expect(h == successor_h, "H differs from the successor relation at m=" + std::to_string(m));
            t.expect(v == successor_v, "V differs from the successor relation at m=" + std::to_string(m));
        }

        TilingInstance one{constant, vector<string>{"t"}};
        auto exact = product(encode_tiling_php(one, EncodingMode::exact).factors);
        auto literal = product(encode_tiling_php(one, EncodingMode::paper_literal).factors);
        auto he = realised(exact, horizontal_name(1), 1), hl = realised(literal, horizontal_name(1), 1);
        t.expect(std::includes(hl.begin(), hl.end(), he.begin(), he.end()) && hl.size() > he.size(),
            "paper-literal H1 is not a strict superset at m=1");
        return t.outcome("m=1..3 exact H,V equal successor; m=1 paper-literal H1 has " + std::to_string(hl.size())
            + " pairs vs " + std::to_string(he.size()));
    }

    auto criterion_star() -> Outcome
    {
        std::mt19937_64 rng{1005};
        Tally t;
        size_t yes = 0;
        for (int round = 0; round < 250; ++round) {
            Signature sig{{{"P", uniform(rng, 1, 2)}, {"Q", uniform(rng, 1, 2)}}};
            PhpInstance inst;
            for (size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i)
                inst.factors.push_back(random_sparse_structure(rng, sig, uniform(rng, 1, 3), 4, "f"));
            inst.target = random_sparse_structure(rng, sig, uniform(rng, 1, 3), 4, "t");
            auto expected = brute_force_php(inst.factors, inst.target);
            auto single = single_relation_transform(inst);
            auto tag = " in instance " + std::to_string(round);
            t.expect(decide_php(single).holds == expected, "verdict changes" + tag);
            if (expected) {
                ++yes;
                auto h = *decide_php(inst).witness;
                auto lifted = lift_hom_star(h, inst);
                t.expect(is_homomorphism(product(single.factors), single.target, lifted), "lift invalid" + tag);
                PhpInstance starred;
                for (auto & f : inst.factors)
                    starred.factors.push_back(star_transform(f));
                starred.target = star_transform(inst.target);
                t.expect(is_homomorphism(product(starred.factors), starred.target, lifted), "lift invalid on star" + tag);
            }
        }
        return t.outcome("250 instances, " + std::to_string(yes) + " YES");
    }

    auto criterion_digraph() -> Outcome
    {
        std::mt19937_64 rng{1006};
        Tally t;
        size_t yes = 0, audited = 0;
        for (int round = 0; round < 250; ++round) {
            Signature sig{{{"R", uniform(rng, 1, 2)}}};
            PhpInstance inst;
            for (size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i)
                inst.factors.push_back(random_sparse_structure(rng, sig, uniform(rng, 1, 3), 4, "f"));
            inst.target = random_sparse_structure(rng, sig, uniform(rng, 1, 3), 4, "t");
            auto tag = " in instance " + std::to_string(round);

            auto expected = brute_force_php(inst.factors, inst.target);
            auto digraphs = digraph_transform(inst);
            auto verdict = decide_php(digraphs);
            t.expect(verdict.holds == expected, "verdict changes" + tag);

            auto padded_arity = sig[0].arity + 1;
            auto audit = [&](const Structure & original, const Structure & gadget, const string & what) {
                auto longest = longest_path_length(gadget);
                t.expect(longest.has_value(), what + " gadget is cyclic" + tag);
                if (! original.relation(0).empty()) {
                    t.expect(longest == padded_arity, what + " gadget path length" + tag);
                    ++audited;
                }
            };
            for (size_t i = 0; i < inst.factors.size(); ++i)
                audit(inst.factors[i], digraphs.factors[i], "factor");
            audit(inst.target, digraphs.target, "target");

            if (expected) {
                ++yes;
                auto h = *decide_php(inst).witness;
                auto lifted = lift_hom_digraph(h, inst);
                t.expect(is_homomorphism(product(digraphs.factors), digraphs.target, lifted), "lift invalid" + tag);
                t.expect(restrict_hom_digraph(lifted, inst) == h, "round trip changes the map" + tag);
                auto back = restrict_hom_digraph(*verdict.witness, inst);
                t.expect(is_homomorphism(product(inst.factors), inst.target, back), "restriction invalid" + tag);
            }
        }
        return t.outcome("250 instances, " + std::to_string(yes) + " YES, " + std::to_string(audited)
            + " gadgets with a chain audited");
    }

    auto criterion_definability() -> Outcome
    {
        Tally t;
        auto loop = self_loop();
        auto v1 = decide_cq_definability(loop, TupleSet{{0}});
        t.expect(std::holds_alternative<Definable>(v1), "self loop not definable");
        if (auto d = std::get_if<Definable>(&v1))
            t.expect(evaluate(d->query, loop) == TupleSet{{0}}, "self loop query wrong");

        auto path = directed_path(3);
        TupleSet start{{path.element("a")}};
        auto v2 = decide_cq_definability(path, start);
        t.expect(std::holds_alternative<Definable>(v2), "path start not definable");
        if (auto d = std::get_if<Definable>(&v2))
            t.expect(evaluate(d->query, path) == start, "path start query wrong");

        auto v3 = decide_cq_definability(path, TupleSet{{path.element("a")}, {path.element("c")}});
        t.expect(std::holds_alternative<NotDefinable>(v3), "path ends definable");
        if (auto n = std::get_if<NotDefinable>(&v3)) {
            t.expect(n->witness_tuple == Tuple{path.element("b")}, "witness is not b");
            t.expect(is_homomorphism(n->pointed_product.structure, path, n->witness_hom), "witness invalid");
        }

        std::mt19937_64 rng{1007};
        Signature sig{{{"E", 2}}};
        size_t definable = 0, not_definable = 0;
        for (int round = 0; round < 200; ++round) {
            auto inst = random_structure(rng, sig, uniform(rng, 1, 3), 0.5);
            TupleSet s;
            size_t k = uniform(rng, 1, 2);
            for (size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i) {
                Tuple tuple;
                for (size_t j = 0; j < k; ++j)
                    tuple.push_back(Element(uniform(rng, 0, inst.size() - 1)));
                s.insert(tuple);
            }
            DefinabilityVerdict verdict;
            try {
                verdict = decide_cq_definability(inst, s);
            }
            catch (const UnsafeQuery &) {
                continue;
            }
            auto tag = " in instance " + std::to_string(round);
            if (auto d = std::get_if<Definable>(&verdict)) {
                t.expect(evaluate(d->query, inst) == s, "query does not define S" + tag);
                ++definable;
            }
            else {
                auto & n = std::get<NotDefinable>(verdict);
                t.expect(! s.contains(n.witness_tuple), "witness inside S" + tag);
                t.expect(is_homomorphism(n.pointed_product.structure, inst, n.witness_hom), "witness invalid" + tag);
                t.expect(n.witness_hom.apply(n.pointed_product.distinguished) == n.witness_tuple,
                    "witness misses the tuple" + tag);
                ++not_definable;
            }
        }
        return t.outcome("3 worked examples; random: " + std::to_string(definable) + " definable, "
            + std::to_string(not_definable) + " not definable");
    }

    auto criterion_end_to_end() -> Outcome
    {
        auto begin = Clock::now();
        std::mt19937_64 rng{1008};
        Tally t;
        size_t instances = 0, yes = 0;
        Signature sig{{{"R", 2}}};
        while (instances < 40) {
            PhpInstance inst;
            for (size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i)
                inst.factors.push_back(random_sparse_structure(rng, sig, uniform(rng, 1, 2), 2, "f"));
            inst.target = random_sparse_structure(rng, sig, uniform(rng, 1, 2), uniform(rng, 1, 2), "t");
            bool nonempty = ! inst.target.relation(0).empty();
            for (auto & f : inst.factors)
                nonempty = nonempty && ! f.relation(0).empty();
            if (! nonempty)
                continue;

            auto tag = " in instance " + std::to_string(instances++);
            auto digraphs = digraph_transform(inst);
            auto php = decide_php(digraphs).holds;
            auto reduction = reduce_php_to_nondefinability(digraphs);
            t.expect(apex_path_audit(reduction), "apex audit fails" + tag);
            auto verdict = decide_cq_definability(reduction.instance, reduction.selection);
            t.expect(php == std::holds_alternative<NotDefinable>(verdict), "equivalence fails" + tag);
            t.expect(php == brute_force_php(inst.factors, inst.target), "digraph verdict differs from original" + tag);
            yes += php;
        }
        t.expect(yes >= 5 && instances - yes >= 5, "corpus is one-sided");
        return t.outcome(std::to_string(instances) + " instances, " + std::to_string(yes) + " YES, "
            + fmt(seconds_since(begin)));
    }

    struct Run
    {
        int code;
        string out;
    };

    auto shell_quote(const string & s) -> string
    {
        string result = "'";
        for (char c : s)
            result += c == '\'' ? string{"'\\''"} : string{c};
        return result + "'";
    }

    auto run_tool(const string & tool, const vector<string> & args) -> Run
    {
        string command = shell_quote(tool);
        for (auto & a : args)
            command += " " + shell_quote(a);
        command += " 2>/dev/null";
        Run r{-1, ""};
        auto pipe = ::popen(command.c_str(), "r");
        if (! pipe)
            return r;
        char buffer[4096];
        size_t n;
        while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
            r.out.append(buffer, n);
        auto status = ::pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return r;
    }

    auto directory_snapshot(const fs::path & dir) -> std::map<string, string>
    {
        std::map<string, string> files;
        if (! fs::exists(dir))
            return files;
        for (auto & entry : fs::recursive_directory_iterator(dir))
            if (entry.is_regular_file()) {
                std::ifstream in{entry.path(), std::ios::binary};
                files[fs::relative(entry.path(), dir).string()] = string{std::istreambuf_iterator<char>{in}, {}};
            }
        return files;
    }

    auto criterion_determinism(const string & tool) -> Outcome
    {
        Tally t;
        if (tool.empty() || ! fs::exists(tool))
            return {false, "CLI executable not found"};

        auto dir = fs::temp_directory_path() / ("homforge-acceptance-" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
        auto put = [&](const string & name, const string & text) {
            write_text_file(dir / name, text);
            return (dir / name).string();
        };
        auto edge = put("edge.json", serialize_structure(one_edge()));
        auto loop = put("loop.json", serialize_structure(self_loop()));
        auto vertex = put("vertex.json", serialize_structure(isolated_vertex()));
        auto path = put("path.json", serialize_structure(directed_path(3)));
        auto multi = put("multi.json", serialize_structure(structure("a b", {{"A", 1, {"a"}}, {"B", 2, {"a b"}}})));
        auto multi_target = put("multi_target.json", serialize_structure(structure("x", {{"A", 1, {"x"}}, {"B", 2, {"x x"}}})));
        auto r_edge = put("r_edge.json", serialize_structure(structure("a b", {{"R", 2, {"a b"}}})));
        auto r_target = put("r_target.json", serialize_structure(structure("x y", {{"R", 2, {"x y", "y y"}}})));
        auto system = put("system.json", R"({"tiles":["w","b"],"hcompat":[["w","b"],["b","w"]],"vcompat":[["w","b"],["b","w"]]})");
        auto query = put("query.json", R"({"free":["x"],"bound":["y"],"atoms":[["E",["x","y"]]]})");
        auto start = put("start.json", R"([["a"]])");
        auto ends = put("ends.json", R"([["a"],["c"]])");

        // digraph instance for the php-to-cqdef reduction
        auto gadgets = digraph_transform(PhpInstance{{structure("a b", {{"R", 2, {"a b"}}})}, structure("x y", {{"R", 2, {"x y", "y y"}}})});
        auto g_factor = put("g_factor.json", serialize_structure(gadgets.factors[0]));
        auto g_target = put("g_target.json", serialize_structure(gadgets.target));

        vector<pair<vector<string>, string>> commands{
            {{"check-hom", edge, edge, "--target", loop, "--witness"}, ""},
            {{"check-hom", edge, edge, "--target", vertex}, ""},
            {{"check-hom", edge, edge, "--target", loop, "--witness", "--lazy"}, ""},
            {{"--pretty", "check-hom", path, "--target", path, "--witness"}, ""},
            {{"product", edge, path}, ""},
            {{"product", edge, edge, "--out", "OUT/product.json"}, "OUT"},
            {{"solve-tiling", "--system", system, "--prefix", "w", "b"}, ""},
            {{"reduce", "tiling", "--system", system, "--prefix", "w", "--mode", "exact"}, ""},
            {{"reduce", "tiling", "--system", system, "--prefix", "w", "b", "--mode", "paper-literal", "--binarize", "--out", "OUT"}, "OUT"},
            {{"reduce", "single-rel", multi, multi, "--target", multi_target}, ""},
            {{"reduce", "single-rel", multi, "--target", multi_target, "--out", "OUT"}, "OUT"},
            {{"reduce", "digraph", r_edge, r_edge, "--target", r_target}, ""},
            {{"reduce", "digraph", r_edge, "--target", r_target, "--out", "OUT"}, "OUT"},
            {{"reduce", "php-to-cqdef", g_factor, "--target", g_target}, ""},
            {{"reduce", "php-to-cqdef", g_factor, "--target", g_target, "--out", "OUT"}, "OUT"},
            {{"cq", "eval", query, path}, ""},
            {{"cq", "canonical", path, "--point", "a"}, ""},
            {{"cqdef", "check", path, "--relation", start}, ""},
            {{"cqdef", "check", path, "--relation", ends, "--witness"}, ""},
        };

        size_t index = 0;
        for (auto & [args, out_dir] : commands) {
            vector<Run> runs;
            vector<std::map<string, string>> written;
            for (int attempt = 0; attempt < 2; ++attempt) {
                auto out = dir / ("run" + std::to_string(index) + "_" + std::to_string(attempt));
                vector<string> full{"--threads", "1"};
                for (auto & a : args) {
                    auto pos = a.find("OUT");
                    full.push_back(pos == string::npos ? a : a.substr(0, pos) + out.string() + a.substr(pos + 3));
                }
                runs.push_back(run_tool(tool, full));
                written.push_back(directory_snapshot(out));
                // run directory replaced by OUT
                auto & text = runs.back().out;
                for (size_t p; (p = text.find(out.string())) != string::npos;)
                    text.replace(p, out.string().size(), "OUT");
            }
            auto name = args[0] == "--pretty" ? args[1] : args[0] + (args.size() > 1 && args[0] == "reduce" ? " " + args[1] : "");
            auto tag = " for command " + std::to_string(index) + " (" + name + ")";
            t.expect(runs[0].code == runs[1].code, "exit codes differ" + tag);
            t.expect(runs[0].code == 0 || runs[0].code == 1, "unexpected exit code " + std::to_string(runs[0].code) + tag);
            t.expect(runs[0].out == runs[1].out, "stdout differs" + tag);
            t.expect(! runs[0].out.empty(), "no output" + tag);
            t.expect(written[0] == written[1], "written files differ" + tag);
            if (! out_dir.empty())
                t.expect(! written[0].empty(), "nothing written" + tag);
            for (auto & [file, text] : written[0])
                if (file.ends_with(".json") && file != "relation.json")
                    try {
                        parse_structure(text);
                    }
                    catch (const Error & e) {
                        t.expect(false, file + " does not re-parse" + tag);
                    }
            ++index;
        }
        fs::remove_all(dir);
        return t.outcome(std::to_string(commands.size()) + " invocations, each run twice");
    }
}

auto main(int argc, char * argv[]) -> int
{
    string tool = argc > 1 ? argv[1] : "";
    vector<pair<string, std::function<Outcome()>>> criteria{
        {"solver agrees with exhaustive enumeration", criterion_solver},
        {"product cardinality and projections", criterion_product},
        {"exact tiling encoding matches brute-force tiling", criterion_tiling},
        {"successor decomposition identity", criterion_decomposition},
        {"star and merge preserve the answer", criterion_star},
        {"digraph transform preserves the answer", criterion_digraph},
        {"definability certificates", criterion_definability},
        {"php to non-definability end to end", criterion_end_to_end},
        {"CLI output is deterministic", [&] { return criterion_determinism(tool); }},
    };

    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto & [name, check] = criteria[i];
        auto started = Clock::now();
        Outcome outcome;
        try {
            outcome = check();
        }
        catch (const std::exception & e) {
            outcome = {false, string{"exception: "} + e.what()};
        }
        failed += ! outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << name << " ("
                  << outcome.detail << ") [" << fmt(seconds_since(started)) << "]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
