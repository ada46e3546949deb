#include <homforge/errors.hh>
#include <homforge/identifier.hh>

using std::span;
using std::string;
using std::string_view;
using std::vector;

namespace
{
    auto embeds_verbatim(string_view component) -> bool
    {
        int depth = 0;
        for (char c : component) {
            switch (c) {
            case '\\': return false;
            case '(': ++depth; break;
            case ')':
                if (--depth < 0)
                    return false;
                break;
            case ',':
                if (0 == depth)
                    return false;
                break;
            default: break;
            }
        }
        return 0 == depth;
    }
}

auto homforge::compose_identifier(span<const string> components) -> string
{
    string result = "(";
    bool first = true;
    for (auto & c : components) {
        if (! first)
            result += ',';
        first = false;

        if (embeds_verbatim(c))
            result += c;
        else
            for (char ch : c) {
                if (ch == '(' || ch == ')' || ch == ',' || ch == '\\')
                    result += '\\';
                result += ch;
            }
    }
    result += ')';
    return result;
}

auto homforge::decompose_identifier(string_view identifier) -> vector<string>
{
    if (identifier.size() < 2 || identifier.front() != '(' || identifier.back() != ')')
        throw ParseError{"not a composite identifier: '" + string{identifier} + "'"};

    vector<string> result(1);
    int depth = 0;
    auto inner = identifier.substr(1, identifier.size() - 2);
    for (std::size_t i = 0; i < inner.size(); ++i) {
        char c = inner[i];
        if (c == '\\') {
            if (++i == inner.size())
                throw ParseError{"dangling escape in '" + string{identifier} + "'"};
            result.back() += inner[i];
            continue;
        }

        if (c == ',' && 0 == depth) {
            result.emplace_back();
            continue;
        }

        if (c == '(')
            ++depth;
        else if (c == ')' && --depth < 0)
            throw ParseError{"unbalanced composite identifier '" + string{identifier} + "'"};
        result.back() += c;
    }

    if (0 != depth)
        throw ParseError{"unbalanced composite identifier '" + string{identifier} + "'"};
    return result;
}
