#include <homforge/errors.hh>
#include <homforge/solver.hh>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <thread>

using std::function;
using std::nullopt;
using std::optional;
using std::pair;
using std::size_t;
using std::span;
using std::uint64_t;
using std::vector;

namespace homforge
{
    auto SolverConfig::validate() const -> void
    {
        if (enumeration_cap && *enumeration_cap < 1)
            throw InvalidInput{"enumeration cap must be at least 1"};
        if (product_guard < 1)
            throw InvalidInput{"product guard must be at least 1"};
        if (threads < 1)
            throw InvalidInput{"thread count must be at least 1"};
    }

    namespace
    {
        using Assignment = vector<Element>;

        struct Constraint
        {
            size_t relation;
            Tuple scope;
            // position of the first occurrence of scope[p] in scope
            vector<size_t> first;
        };

        struct ConstraintModel
        {
            size_t variables = 0;
            size_t values = 0;
            vector<Constraint> constraints;
            vector<const vector<Tuple> *> allowed;
            // containing[r][p][a]: indices of the allowed tuples of relation r with a at position p
            vector<vector<vector<vector<std::uint32_t>>>> containing;
            // projections[r]: per position, the values occurring there, as bitsets
            vector<vector<uint64_t>> projections;
            vector<vector<size_t>> constraints_of;

            auto add_constraint(size_t relation, Tuple scope) -> void
            {
                Constraint c{relation, std::move(scope), {}};
                c.first.resize(c.scope.size());
                for (size_t p = 0; p < c.scope.size(); ++p)
                    c.first[p] = std::find(c.scope.begin(), c.scope.end(), c.scope[p]) - c.scope.begin();
                constraints.push_back(std::move(c));
            }

            auto finish() -> void
            {
                auto words = (values + 63) / 64;
                containing.assign(allowed.size(), {});
                projections.assign(allowed.size(), {});
                for (size_t r = 0; r < allowed.size(); ++r) {
                    auto & tuples = *allowed[r];
                    auto arity = tuples.empty() ? 0 : tuples.front().size();
                    containing[r].assign(arity, vector<vector<std::uint32_t>>(values));
                    projections[r].assign(arity * words, 0);
                    for (size_t i = 0; i < tuples.size(); ++i)
                        for (size_t p = 0; p < arity; ++p) {
                            auto a = tuples[i][p];
                            containing[r][p][a].push_back(std::uint32_t(i));
                            projections[r][p * words + a / 64] |= uint64_t(1) << (a % 64);
                        }
                }
                constraints_of.assign(variables, {});
                for (size_t c = 0; c < constraints.size(); ++c) {
                    auto & con = constraints[c];
                    for (size_t p = 0; p < con.scope.size(); ++p)
                        if (con.first[p] == p)
                            constraints_of[con.scope[p]].push_back(c);
                }
            }
        };

        auto model_for(const Structure & source, const Structure & target) -> ConstraintModel
        {
            require_same_signature(source, target, "homomorphism search");
            ConstraintModel model;
            model.variables = source.size();
            model.values = target.size();
            for (size_t r = 0; r < source.signature().size(); ++r) {
                model.allowed.push_back(&target.relation(r));
                for (auto & t : source.relation(r))
                    model.add_constraint(r, t);
            }
            model.finish();
            return model;
        }

        auto product_model_for(span<const Structure> factors, const Structure & target, size_t guard)
            -> ConstraintModel
        {
            check_product_guard(factors, guard);
            ProductIndexer indexer{factors};
            ConstraintModel model;
            model.variables = indexer.size();
            model.values = target.size();

            auto & signature = target.signature();
            for (size_t r = 0; r < signature.size(); ++r) {
                model.allowed.push_back(&target.relation(r));
                size_t total = 1;
                bool empty = false;
                for (auto & f : factors) {
                    if (f.relation(r).empty())
                        empty = true;
                    else if (total > guard / f.relation(r).size())
                        total = guard + 1;
                    else
                        total *= f.relation(r).size();
                }
                if (empty)
                    continue;
                if (total > guard)
                    throw GuardExceeded{"product relation '" + signature[r].name + "' too large", total, guard};

                vector<size_t> choice(factors.size(), 0);
                while (true) {
                    Tuple scope(signature[r].arity, 0);
                    for (size_t i = 0; i < factors.size(); ++i) {
                        auto & ft = factors[i].relation(r)[choice[i]];
                        for (size_t q = 0; q < scope.size(); ++q)
                            scope[q] += ft[q] * indexer.stride(i);
                    }
                    model.add_constraint(r, std::move(scope));

                    size_t i = factors.size();
                    while (i-- > 0) {
                        if (++choice[i] < factors[i].relation(r).size())
                            break;
                        choice[i] = 0;
                    }
                    if (i == size_t(-1))
                        break;
                }
            }
            model.finish();
            return model;
        }

        class Search
        {
        public:
            using Visitor = function<bool(const Assignment &)>;

            Search(const ConstraintModel & model, const SolverConfig & config) :
                _model(model),
                _config(config),
                _words((model.values + 63) / 64),
                _bits(model.variables * _words, 0),
                _assigned(model.variables, 0),
                _in_queue(model.constraints.size(), 0),
                _scratch(_words)
            {
                for (size_t v = 0; v < model.variables; ++v)
                    for (size_t w = 0; w < _words; ++w) {
                        auto remaining = model.values - w * 64;
                        _bits[v * _words + w] = remaining >= 64 ? ~uint64_t(0) : (uint64_t(1) << remaining) - 1;
                    }
            }

            auto set_abort(function<bool()> should_abort) -> void { _should_abort = std::move(should_abort); }

            auto aborted() const -> bool { return _aborted; }

            /// Before initialise() only.
            auto fix(Element var, Element value) -> void
            {
                auto * d = domain(var);
                bool had = value < _model.values && test(var, value);
                std::fill(d, d + _words, 0);
                if (had)
                    d[value / 64] |= uint64_t(1) << (value % 64);
            }

            auto initialise() -> bool
            {
                for (size_t v = 0; v < _model.variables; ++v)
                    if (0 == count(v))
                        return false;
                _tracking = true;
                for (size_t v = 0; v < _model.variables; ++v)
                    attach(v);
                if (_config.propagation == Propagation::arc_consistency) {
                    vector<size_t> all(_model.constraints.size());
                    for (size_t c = 0; c < all.size(); ++c)
                        all[c] = c;
                    return propagate(all);
                }
                return true;
            }

            auto choose(span<const Element> among) const -> optional<Element>
            {
                optional<Element> best;
                size_t best_size = std::numeric_limits<size_t>::max();
                auto consider = [&](Element v) {
                    if (_assigned[v])
                        return;
                    if (_config.variable_order == VariableOrder::input_order) {
                        if (! best || v < *best)
                            best = v;
                        return;
                    }
                    auto size = count(v);
                    if (size < best_size || (size == best_size && v < *best)) {
                        best = v;
                        best_size = size;
                    }
                };

                if (among.empty()) {
                    if (_branchable.empty())
                        return nullopt;
                    return _branchable.begin()->second;
                }
                for (auto v : among)
                    consider(v);
                return best;
            }

            auto values_of(Element var) const -> vector<Element>
            {
                vector<Element> result;
                auto * d = domain(var);
                for (size_t w = 0; w < _words; ++w)
                    for (auto bits = d[w]; bits; bits &= bits - 1)
                        result.push_back(Element(w * 64 + std::countr_zero(bits)));
                return result;
            }

            /// Assigns and propagates; on failure the caller undoes to its mark.
            auto assign(Element var, Element value) -> bool
            {
                std::fill(_scratch.begin(), _scratch.end(), 0);
                _scratch[value / 64] = uint64_t(1) << (value % 64);
                narrow(var, _scratch.data());
                detach(var);
                _assigned[var] = 1;
                _assigned_stack.push_back(var);

                if (_config.propagation == Propagation::arc_consistency)
                    return propagate(_model.constraints_of[var]);
                return check_assigned(var);
            }

            struct Mark
            {
                size_t trail;
                size_t assigned;
            };

            auto mark() const -> Mark { return {_trail.size(), _assigned_stack.size()}; }

            auto undo(Mark m) -> void
            {
                while (_trail.size() > m.trail) {
                    auto [var, offset] = _trail.back();
                    detach(var);
                    std::copy(_saved.begin() + offset, _saved.begin() + offset + _words, domain(var));
                    attach(var);
                    _saved.resize(offset);
                    _trail.pop_back();
                }
                while (_assigned_stack.size() > m.assigned) {
                    auto var = _assigned_stack.back();
                    _assigned[var] = 0;
                    attach(var);
                    _assigned_stack.pop_back();
                }
            }

            auto solution() const -> Assignment
            {
                Assignment result(_model.variables);
                for (size_t v = 0; v < _model.variables; ++v) {
                    auto * d = domain(v);
                    for (size_t w = 0; w < _words; ++w)
                        if (d[w]) {
                            result[v] = Element(w * 64 + std::countr_zero(d[w]));
                            break;
                        }
                }
                return result;
            }

            /// Visits full solutions in search order; returns true if stopped by the visitor or an abort.
            auto search(const Visitor & visit) -> bool
            {
                return depth_first({}, [&]() { return visit(solution()); });
            }

            /**
             * Branches on the priority variables only; once they are all fixed, looks
             * for one completion and hands it to the visitor.
             */
            auto search_projected(span<const Element> priority, const Visitor & visit) -> bool
            {
                return depth_first(priority, [&]() {
                    optional<Assignment> found;
                    search([&](const Assignment & a) {
                        found = a;
                        return true;
                    });
                    if (_aborted)
                        return true;
                    return found && visit(*found);
                });
            }

        private:
            struct Frame
            {
                Element var;
                vector<Element> values;
                size_t next;
                Mark mark;
            };

            /// Iterative backtracking over the variables chosen from among (all if empty); leaf returns true to stop.
            template <typename Leaf_>
            auto depth_first(span<const Element> among, const Leaf_ & leaf) -> bool
            {
                auto start = mark();
                vector<Frame> frames;
                bool stop = false, entering = true;
                while (true) {
                    if (entering) {
                        if (_should_abort && _should_abort()) {
                            _aborted = stop = true;
                            break;
                        }
                        if (auto var = choose(among))
                            frames.push_back(Frame{*var, values_of(*var), 0, mark()});
                        else if (leaf()) {
                            stop = true;
                            break;
                        }
                    }
                    if (frames.empty())
                        break;
                    auto & f = frames.back();
                    undo(f.mark);
                    if (f.next == f.values.size()) {
                        frames.pop_back();
                        entering = false;
                        continue;
                    }
                    auto value = f.values[f.next++];
                    entering = assign(f.var, value);
                }
                undo(start);
                return stop;
            }

            auto domain(size_t var) -> uint64_t * { return _bits.data() + var * _words; }
            auto domain(size_t var) const -> const uint64_t * { return _bits.data() + var * _words; }

            auto test(size_t var, Element value) const -> bool
            {
                return (domain(var)[value / 64] >> (value % 64)) & 1;
            }

            auto count(size_t var) const -> size_t
            {
                size_t result = 0;
                auto * d = domain(var);
                for (size_t w = 0; w < _words; ++w)
                    result += std::popcount(d[w]);
                return result;
            }

            auto narrow(size_t var, const uint64_t * bits) -> void
            {
                auto * d = domain(var);
                _trail.emplace_back(var, _saved.size());
                _saved.insert(_saved.end(), d, d + _words);
                detach(var);
                std::copy(bits, bits + _words, d);
                attach(var);
            }

            // unassigned, and with more than one value when propagating
            auto branchable(size_t var) const -> bool
            {
                return ! _assigned[var] && (_config.propagation != Propagation::arc_consistency || count(var) > 1);
            }

            auto key(size_t var) const -> pair<size_t, Element>
            {
                return {_config.variable_order == VariableOrder::input_order ? 0 : count(var), Element(var)};
            }

            auto detach(size_t var) -> void
            {
                if (_tracking && branchable(var))
                    _branchable.erase(key(var));
            }

            auto attach(size_t var) -> void
            {
                if (_tracking && branchable(var))
                    _branchable.insert(key(var));
            }

            auto check_assigned(Element var) -> bool
            {
                Tuple values;
                for (auto c : _model.constraints_of[var]) {
                    auto & con = _model.constraints[c];
                    if (! std::all_of(con.scope.begin(), con.scope.end(), [&](Element v) { return _assigned[v]; }))
                        continue;
                    values.resize(con.scope.size());
                    for (size_t p = 0; p < con.scope.size(); ++p)
                        values[p] = single_value(con.scope[p]);
                    if (! std::binary_search(_model.allowed[con.relation]->begin(), _model.allowed[con.relation]->end(), values))
                        return false;
                }
                return true;
            }

            auto single_value(size_t var) const -> Element
            {
                auto * d = domain(var);
                for (size_t w = 0; w < _words; ++w)
                    if (d[w])
                        return Element(w * 64 + std::countr_zero(d[w]));
                return 0;
            }

            auto revise(size_t c, vector<Element> & changed) -> bool
            {
                auto & con = _model.constraints[c];
                auto arity = con.scope.size();
                _support.assign(arity * _words, 0);

                auto & tuples = *_model.allowed[con.relation];
                auto supported = [&](const Tuple & t) {
                    for (size_t p = 0; p < arity; ++p) {
                        if (con.first[p] != p ? t[p] != t[con.first[p]] : ! test(con.scope[p], t[p]))
                            return;
                    }
                    for (size_t p = 0; p < arity; ++p)
                        _support[p * _words + t[p] / 64] |= uint64_t(1) << (t[p] % 64);
                };

                // walk the tuples through the position with the smallest domain
                size_t pivot = 0, pivot_size = std::numeric_limits<size_t>::max();
                bool all_full = true;
                for (size_t p = 0; p < arity; ++p) {
                    auto size = count(con.scope[p]);
                    all_full = all_full && con.first[p] == p && size == _model.values;
                    if (con.first[p] == p && size < pivot_size) {
                        pivot = p;
                        pivot_size = size;
                    }
                }
                if (all_full) {
                    if (! tuples.empty())
                        std::copy(_model.projections[con.relation].begin(), _model.projections[con.relation].end(),
                            _support.begin());
                }
                else if (pivot_size * 4 >= _model.values || tuples.empty())
                    for (auto & t : tuples)
                        supported(t);
                else
                    for (auto a : values_of(con.scope[pivot]))
                        for (auto i : _model.containing[con.relation][pivot][a])
                            supported(tuples[i]);

                for (size_t p = 0; p < arity; ++p) {
                    if (con.first[p] != p)
                        continue;
                    auto var = con.scope[p];
                    auto * d = domain(var);
                    bool differs = false, nonempty = false;
                    for (size_t w = 0; w < _words; ++w) {
                        _scratch[w] = d[w] & _support[p * _words + w];
                        differs = differs || _scratch[w] != d[w];
                        nonempty = nonempty || _scratch[w];
                    }
                    if (! nonempty)
                        return false;
                    if (differs) {
                        narrow(var, _scratch.data());
                        changed.push_back(var);
                    }
                }
                return true;
            }

            auto propagate(span<const size_t> initial) -> bool
            {
                _queue.clear();
                for (auto c : initial)
                    if (! _in_queue[c]) {
                        _in_queue[c] = 1;
                        _queue.push_back(c);
                    }

                vector<Element> changed;
                for (size_t head = 0; head < _queue.size(); ++head) {
                    auto c = _queue[head];
                    _in_queue[c] = 0;
                    changed.clear();
                    if (! revise(c, changed)) {
                        for (size_t rest = head + 1; rest < _queue.size(); ++rest)
                            _in_queue[_queue[rest]] = 0;
                        _queue.clear();
                        return false;
                    }
                    for (auto v : changed)
                        for (auto other : _model.constraints_of[v])
                            if (other != c && ! _in_queue[other]) {
                                _in_queue[other] = 1;
                                _queue.push_back(other);
                            }
                }
                _queue.clear();
                return true;
            }

            const ConstraintModel & _model;
            const SolverConfig & _config;
            size_t _words;
            vector<uint64_t> _bits;
            vector<char> _assigned;
            vector<Element> _assigned_stack;
            vector<pair<size_t, size_t>> _trail;
            vector<uint64_t> _saved;
            vector<char> _in_queue;
            vector<size_t> _queue;
            vector<uint64_t> _support;
            vector<uint64_t> _scratch;
            function<bool()> _should_abort;
            bool _aborted = false;
            bool _tracking = false;
            std::set<pair<size_t, Element>> _branchable;
        };

        auto fix_all(Search & s, span<const pair<Element, Element>> fixed) -> void
        {
            for (auto & [var, value] : fixed)
                s.fix(var, value);
        }

        auto find_first(const ConstraintModel & model, const SolverConfig & config,
            span<const pair<Element, Element>> fixed) -> optional<Assignment>
        {
            config.validate();
            Search root{model, config};
            fix_all(root, fixed);
            if (! root.initialise())
                return nullopt;

            auto capture = [](optional<Assignment> & into) {
                return [&into](const Assignment & a) {
                    into = a;
                    return true;
                };
            };

            if (config.threads <= 1) {
                optional<Assignment> found;
                root.search(capture(found));
                return found;
            }

            auto var = root.choose({});
            if (! var)
                return root.solution();
            auto values = root.values_of(*var);

            // Each worker takes every T-th root value. The answer is the solution
            // below the earliest root value that has one, which is exactly what
            // the sequential search returns.
            constexpr size_t none = std::numeric_limits<size_t>::max();
            std::atomic<size_t> best{none};
            vector<optional<Assignment>> results(values.size());
            vector<std::thread> workers;
            auto thread_count = std::min<size_t>(config.threads, values.size());
            for (size_t k = 0; k < thread_count; ++k)
                workers.emplace_back([&, k] {
                    for (size_t p = k; p < values.size(); p += thread_count) {
                        if (p > best.load())
                            return;
                        Search s{model, config};
                        fix_all(s, fixed);
                        s.initialise();
                        s.set_abort([&best, p] { return best.load() < p; });
                        if (s.assign(*var, values[p]))
                            s.search(capture(results[p]));
                        if (results[p]) {
                            auto current = best.load();
                            while (p < current && ! best.compare_exchange_weak(current, p)) {
                            }
                            return;
                        }
                    }
                });
            for (auto & w : workers)
                w.join();

            if (best.load() == none)
                return nullopt;
            return results[best.load()];
        }

        auto to_homomorphism(optional<Assignment> a) -> optional<Homomorphism>
        {
            if (! a)
                return nullopt;
            return Homomorphism{std::move(*a)};
        }
    }

    auto find_homomorphism(const Structure & source, const Structure & target, const SolverConfig & config)
        -> optional<Homomorphism>
    {
        auto model = model_for(source, target);
        return to_homomorphism(find_first(model, config, {}));
    }

    auto find_homomorphism_extending(const Structure & source, const Structure & target,
        span<const pair<Element, Element>> fixed, const SolverConfig & config) -> optional<Homomorphism>
    {
        auto model = model_for(source, target);
        for (auto & [var, value] : fixed)
            if (var >= source.size() || value >= target.size())
                throw InvalidInput{"fixed pair outside the source or target domain"};
        return to_homomorphism(find_first(model, config, fixed));
    }

    auto enumerate_homomorphisms(const Structure & source, const Structure & target, const SolverConfig & config)
        -> vector<Homomorphism>
    {
        config.validate();
        auto model = model_for(source, target);
        Search s{model, config};
        vector<Homomorphism> result;
        if (! s.initialise())
            return result;

        bool over_cap = false;
        s.search([&](const Assignment & a) {
            result.push_back(Homomorphism{a});
            over_cap = config.enumeration_cap && result.size() > *config.enumeration_cap;
            return over_cap;
        });
        if (over_cap)
            throw CapExceeded{"too many homomorphisms", result.size(), *config.enumeration_cap};

        std::sort(result.begin(), result.end());
        return result;
    }

    auto image_witnesses(const PointedStructure & source, const Structure & target, const SolverConfig & config)
        -> std::map<Tuple, Homomorphism>
    {
        config.validate();
        std::map<Tuple, Homomorphism> result;
        auto model = model_for(source.structure, target);

        if (source.distinguished.empty()) {
            if (auto a = find_first(model, config, {}))
                result.emplace(Tuple{}, Homomorphism{std::move(*a)});
            return result;
        }

        vector<Element> priority;
        for (auto e : source.distinguished)
            if (std::find(priority.begin(), priority.end(), e) == priority.end())
                priority.push_back(e);

        Search s{model, config};
        if (! s.initialise())
            return result;
        s.search_projected(priority, [&](const Assignment & a) {
            Tuple image;
            for (auto e : source.distinguished)
                image.push_back(a[e]);
            result.emplace(std::move(image), Homomorphism{a});
            return false;
        });
        return result;
    }

    auto image_set(const PointedStructure & source, const Structure & target, const SolverConfig & config) -> TupleSet
    {
        TupleSet result;
        for (auto & [t, _] : image_witnesses(source, target, config))
            result.insert(t);
        return result;
    }

    auto decide_php(const PhpInstance & instance, const SolverConfig & config) -> PhpVerdict
    {
        instance.validate();
        config.validate();

        optional<Homomorphism> witness;
        if (config.lazy_product) {
            auto model = product_model_for(instance.factors, instance.target, config.product_guard);
            witness = to_homomorphism(find_first(model, config, {}));
        }
        else {
            auto p = product(instance.factors, config.product_guard);
            witness = find_homomorphism(p, instance.target, config);
        }

        PhpVerdict verdict;
        verdict.holds = witness.has_value();
        verdict.witness = std::move(witness);
        return verdict;
    }
}
