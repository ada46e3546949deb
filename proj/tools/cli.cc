#include "cli.hh"

#include <homforge/definability.hh>
#include <homforge/errors.hh>
#include <homforge/io.hh>
#include <homforge/normalform.hh>
#include <homforge/product.hh>
#include <homforge/query.hh>
#include <homforge/solver.hh>
#include <homforge/tiling.hh>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

using nlohmann::json;
using std::string;
using std::vector;

namespace fs = std::filesystem;

namespace homforge::cli
{
    namespace
    {
        struct Options
        {
            bool pretty = false;
            unsigned threads = 1;
            string order = "most-constrained";
            string propagation = "arc-consistency";
            bool lazy = false;
            bool witness = false;

            vector<string> inputs;
            string target;
            string out;
            string system;
            vector<string> prefix;
            string mode = "exact";
            bool binarize = false;
            vector<string> point;
            string relation;
        };

        auto guard_from_environment() -> std::size_t
        {
            auto value = std::getenv("HOMFORGE_GUARD");
            if (! value)
                return default_product_guard;
            string text{value};
            if (text.empty() || text.find_first_not_of("0123456789") != string::npos)
                throw ParseError{"HOMFORGE_GUARD must be a positive integer"};
            std::size_t guard = 0;
            try {
                guard = std::stoull(text);
            }
            catch (const std::exception &) {
                throw ParseError{"HOMFORGE_GUARD is out of range"};
            }
            if (guard < 1)
                throw ParseError{"HOMFORGE_GUARD must be a positive integer"};
            return guard;
        }

        auto solver_config(const Options & o) -> SolverConfig
        {
            SolverConfig config;
            config.variable_order = o.order == "input" ? VariableOrder::input_order
                                                       : VariableOrder::most_constrained_first;
            config.propagation = o.propagation == "none" ? Propagation::none : Propagation::arc_consistency;
            config.lazy_product = o.lazy;
            config.threads = o.threads;
            config.product_guard = guard_from_environment();
            return config;
        }

        auto read_instance(const Options & o) -> PhpInstance
        {
            PhpInstance instance;
            for (auto & path : o.inputs)
                instance.factors.push_back(read_structure_file(path));
            instance.target = read_structure_file(o.target);
            instance.validate();
            return instance;
        }

        auto read_tiling(const Options & o) -> TilingInstance
        {
            auto system = TileSystem::from_json(read_json_file(o.system));
            try {
                return TilingInstance{std::move(system), o.prefix};
            }
            catch (const InvalidInput & e) {
                throw ParseError{e.what()};
            }
        }

        auto emit(std::ostream & out, const json & j, const Options & o) -> void
        {
            out << (o.pretty ? j.dump(2) : j.dump()) << '\n';
        }

        /// Writes factor_<i>.json and target.json into --out, or returns the instance inline.
        auto instance_output(const PhpInstance & instance, const Options & o) -> json
        {
            if (o.out.empty()) {
                json factors = json::array();
                for (auto & f : instance.factors)
                    factors.push_back(structure_to_json(f));
                return json{{"factors", factors}, {"target", structure_to_json(instance.target)}};
            }

            fs::create_directories(o.out);
            json factors = json::array();
            for (std::size_t i = 0; i < instance.factors.size(); ++i) {
                auto path = (fs::path{o.out} / ("factor_" + std::to_string(i + 1) + ".json")).string();
                write_structure_file(path, instance.factors[i]);
                factors.push_back(path);
            }
            auto target = (fs::path{o.out} / "target.json").string();
            write_structure_file(target, instance.target);
            return json{{"factors", factors}, {"target", target}};
        }

        auto check_hom(const Options & o, std::ostream & out) -> int
        {
            auto instance = read_instance(o);
            auto verdict = decide_php(instance, solver_config(o));
            json result{{"answer", verdict.holds ? "YES" : "NO"}, {"factors", instance.factors.size()},
                {"product_size", product_cardinality(instance.factors)}};
            if (o.witness && verdict.witness) {
                json mapping = json::object();
                ProductIndexer indexer{instance.factors};
                for (std::size_t e = 0; e < indexer.size(); ++e)
                    mapping[product_element_name(instance.factors, indexer.components(e))]
                        = instance.target.name((*verdict.witness)(e));
                result["witness"] = mapping;
            }
            emit(out, result, o);
            return verdict.holds ? exit_yes : exit_no;
        }

        auto product_command(const Options & o, std::ostream & out) -> int
        {
            vector<Structure> factors;
            for (auto & path : o.inputs)
                factors.push_back(read_structure_file(path));
            auto p = product(factors, guard_from_environment());
            if (o.out.empty())
                emit(out, structure_to_json(p), o);
            else {
                if (auto parent = fs::path{o.out}.parent_path(); ! parent.empty())
                    fs::create_directories(parent);
                write_structure_file(o.out, p);
                emit(out, json{{"structure", o.out}}, o);
            }
            return exit_yes;
        }

        auto reduce_tiling(const Options & o, std::ostream & out) -> int
        {
            auto tiling = read_tiling(o);
            auto mode = o.mode == "paper-literal" ? EncodingMode::paper_literal : EncodingMode::exact;
            auto instance = encode_tiling_php(tiling, mode);
            if (o.binarize) {
                for (auto & f : instance.factors)
                    f = binarize_unary(f);
                instance.target = binarize_unary(instance.target);
            }
            emit(out, instance_output(instance, o), o);
            return exit_yes;
        }

        auto solve_tiling(const Options & o, std::ostream & out) -> int
        {
            auto tiling = read_tiling(o);
            auto found = brute_force_tiling(tiling);
            json result{{"answer", found ? "YES" : "NO"}, {"exponent", tiling.exponent()}};
            if (found)
                result["tiling"] = found->to_json(tiling.system);
            emit(out, result, o);
            return found ? exit_yes : exit_no;
        }

        auto reduce_single_relation(const Options & o, std::ostream & out) -> int
        {
            emit(out, instance_output(single_relation_transform(read_instance(o)), o), o);
            return exit_yes;
        }

        auto reduce_digraph(const Options & o, std::ostream & out) -> int
        {
            emit(out, instance_output(digraph_transform(read_instance(o)), o), o);
            return exit_yes;
        }

        auto reduce_php_to_cqdef(const Options & o, std::ostream & out) -> int
        {
            auto reduction = reduce_php_to_nondefinability(read_instance(o));
            auto relation = tuple_set_to_json(reduction.selection, reduction.instance);
            json result{{"path_length", reduction.path_length}};
            if (o.out.empty()) {
                result["structure"] = structure_to_json(reduction.instance);
                result["relation"] = relation;
            }
            else {
                fs::create_directories(o.out);
                auto structure_path = (fs::path{o.out} / "structure.json").string();
                auto relation_path = (fs::path{o.out} / "relation.json").string();
                write_structure_file(structure_path, reduction.instance);
                write_text_file(relation_path, relation.dump() + "\n");
                result["structure"] = structure_path;
                result["relation"] = relation_path;
            }
            emit(out, result, o);
            return exit_yes;
        }

        auto cq_eval(const Options & o, std::ostream & out) -> int
        {
            auto query = query_from_json(read_json_file(o.inputs.at(0)));
            auto structure = read_structure_file(o.inputs.at(1));
            auto answers = evaluate(query, structure, solver_config(o));
            json tuples = json::array();
            if (query.free.empty())
                tuples = answers.empty() ? json::array() : json::array({json::array()});
            else
                tuples = tuple_set_to_json(answers, structure);
            emit(out, json{{"tuples", tuples}}, o);
            return exit_yes;
        }

        auto cq_canonical(const Options & o, std::ostream & out) -> int
        {
            auto structure = read_structure_file(o.inputs.at(0));
            Tuple point;
            for (auto & id : o.point) {
                auto e = structure.find(id);
                if (! e)
                    throw ParseError{"unknown element '" + id + "' in --point"};
                point.push_back(*e);
            }
            emit(out, query_to_json(canonical_query(PointedStructure{structure, point})), o);
            return exit_yes;
        }

        auto cqdef_check(const Options & o, std::ostream & out) -> int
        {
            auto structure = read_structure_file(o.inputs.at(0));
            auto selection = tuple_set_from_json(read_json_file(o.relation), structure);
            auto verdict = decide_cq_definability(structure, selection, solver_config(o));

            if (auto d = std::get_if<Definable>(&verdict)) {
                emit(out, json{{"answer", "DEFINABLE"}, {"query", query_to_json(d->query)}}, o);
                return exit_yes;
            }

            auto & nd = std::get<NotDefinable>(verdict);
            json result{{"answer", "NOT_DEFINABLE"}, {"witness", structure.names_of(nd.witness_tuple)}};
            if (o.witness)
                result["homomorphism"] = homomorphism_to_json(nd.witness_hom, nd.pointed_product.structure, structure);
            emit(out, result, o);
            return exit_no;
        }
    }

    auto run(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
    {
        Options o;
        std::function<int(const Options &, std::ostream &)> action;

        CLI::App app{"Product homomorphisms, their reductions, and CQ-definability", "homforge"};
        app.fallthrough();
        app.require_subcommand(1);
        app.add_flag("--pretty", o.pretty, "Indent JSON output");
        app.add_option("--threads", o.threads, "Worker threads for existence searches")->check(CLI::PositiveNumber);
        app.add_option("--order", o.order, "Variable order")
            ->check(CLI::IsMember({"most-constrained", "input"}));
        app.add_option("--propagation", o.propagation, "Propagation")
            ->check(CLI::IsMember({"arc-consistency", "none"}));

        auto on = [&](CLI::App * sub, int (*f)(const Options &, std::ostream &)) {
            sub->callback([&action, f] { action = f; });
        };

        auto instance_inputs = [&](CLI::App * sub) {
            sub->add_option("factors", o.inputs, "Factor structure files")->required()->check(CLI::ExistingFile);
            sub->add_option("--target", o.target, "Target structure file")->required()->check(CLI::ExistingFile);
        };

        auto check = app.add_subcommand("check-hom", "Decide whether the product of the factors maps to the target");
        instance_inputs(check);
        check->add_flag("--witness", o.witness, "Print the homomorphism");
        check->add_flag("--lazy", o.lazy, "Search without materialising the product");
        on(check, check_hom);

        auto prod = app.add_subcommand("product", "Direct product of structures");
        prod->add_option("factors", o.inputs, "Structure files")->required()->check(CLI::ExistingFile);
        prod->add_option("--out", o.out, "Output file");
        on(prod, product_command);

        auto solve = app.add_subcommand("solve-tiling", "Brute-force tiling oracle");
        solve->add_option("--system", o.system, "Tile system file")->required()->check(CLI::ExistingFile);
        solve->add_option("--prefix", o.prefix, "First-row prefix tiles")->required();
        on(solve, solve_tiling);

        auto reduce = app.add_subcommand("reduce", "Run a reduction");
        reduce->require_subcommand(1);

        auto tiling = reduce->add_subcommand("tiling", "Tiling instance to product homomorphism instance");
        tiling->add_option("--system", o.system, "Tile system file")->required()->check(CLI::ExistingFile);
        tiling->add_option("--prefix", o.prefix, "First-row prefix tiles")->required();
        tiling->add_option("--mode", o.mode, "Encoding mode")->check(CLI::IsMember({"exact", "paper-literal"}));
        tiling->add_flag("--binarize", o.binarize, "Replace unary relations by binary diagonals");
        tiling->add_option("--out", o.out, "Output directory");
        on(tiling, reduce_tiling);

        auto single = reduce->add_subcommand("single-rel", "Reduce to a single relation");
        instance_inputs(single);
        single->add_option("--out", o.out, "Output directory");
        on(single, reduce_single_relation);

        auto digraph = reduce->add_subcommand("digraph", "Reduce a single-relation instance to digraphs");
        instance_inputs(digraph);
        digraph->add_option("--out", o.out, "Output directory");
        on(digraph, reduce_digraph);

        auto cqdef_reduce = reduce->add_subcommand("php-to-cqdef", "Reduce a digraph instance to CQ-definability");
        instance_inputs(cqdef_reduce);
        cqdef_reduce->add_option("--out", o.out, "Output directory");
        on(cqdef_reduce, reduce_php_to_cqdef);

        auto cq = app.add_subcommand("cq", "Conjunctive queries");
        cq->require_subcommand(1);
        auto eval = cq->add_subcommand("eval", "Evaluate a query on a structure");
        eval->add_option("query", o.inputs, "Query file, then structure file")
            ->required()
            ->expected(2)
            ->check(CLI::ExistingFile);
        on(eval, cq_eval);
        auto canonical = cq->add_subcommand("canonical", "Canonical query of a pointed structure");
        canonical->add_option("structure", o.inputs, "Structure file")->required()->expected(1)->check(CLI::ExistingFile);
        canonical->add_option("--point", o.point, "Distinguished elements");
        on(canonical, cq_canonical);

        auto cqdef = app.add_subcommand("cqdef", "CQ-definability");
        cqdef->require_subcommand(1);
        auto cqdef_check_cmd = cqdef->add_subcommand("check", "Decide whether a relation is CQ-definable");
        cqdef_check_cmd->add_option("structure", o.inputs, "Structure file")
            ->required()
            ->expected(1)
            ->check(CLI::ExistingFile);
        cqdef_check_cmd->add_option("--relation", o.relation, "Relation file")->required()->check(CLI::ExistingFile);
        cqdef_check_cmd->add_flag("--witness", o.witness, "Print the certificate homomorphism");
        on(cqdef_check_cmd, cqdef_check);

        vector<string> reversed{args.rbegin(), args.rend()};
        try {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &) {
            out << app.help();
            return exit_yes;
        }
        catch (const CLI::ParseError & e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }

        try {
            return action(o, out);
        }
        catch (const ResourceLimit & e) {
            err << "error: " << e.what() << '\n';
            return exit_resource;
        }
        catch (const Error & e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const fs::filesystem_error & e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }
    }
}
