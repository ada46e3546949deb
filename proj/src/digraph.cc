#include <homforge/digraph.hh>
#include <homforge/errors.hh>

#include <algorithm>

using std::nullopt;
using std::optional;
using std::size_t;
using std::vector;

auto homforge::is_digraph(const Structure & s) -> bool
{
    return s.signature().size() == 1 && s.signature()[0].arity == 2;
}

auto homforge::longest_outgoing_paths(const Structure & digraph) -> optional<vector<size_t>>
{
    if (! is_digraph(digraph))
        throw InvalidInput{"longest paths need a single binary relation, got " + digraph.signature().to_string()};

    vector<vector<Element>> out(digraph.size());
    for (auto & t : digraph.relation(0))
        out[t[0]].push_back(t[1]);

    // iterative DFS; state 0 = unseen, 1 = on stack, 2 = done
    vector<int> state(digraph.size(), 0);
    vector<size_t> length(digraph.size(), 0);
    for (Element root = 0; root < digraph.size(); ++root) {
        if (state[root])
            continue;
        vector<std::pair<Element, size_t>> stack{{root, 0}};
        state[root] = 1;
        while (! stack.empty()) {
            auto & [v, next] = stack.back();
            if (next < out[v].size()) {
                auto w = out[v][next++];
                if (1 == state[w])
                    return nullopt;
                if (0 == state[w]) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
                continue;
            }
            for (auto w : out[v])
                length[v] = std::max(length[v], length[w] + 1);
            state[v] = 2;
            stack.pop_back();
        }
    }
    return length;
}

auto homforge::longest_path_length(const Structure & digraph) -> optional<size_t>
{
    auto lengths = longest_outgoing_paths(digraph);
    if (! lengths)
        return nullopt;
    return lengths->empty() ? 0 : *std::max_element(lengths->begin(), lengths->end());
}
