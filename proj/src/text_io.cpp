#include "teamlogic/core.hpp"

#include <cctype>
#include <sstream>

namespace teamlogic {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

/// Non-empty lines with '#' comments removed, paired with 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t lineno = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) out.emplace_back(lineno, line);
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg)
{
    throw Error("line " + std::to_string(line) + ": " + msg);
}

bool starts_with_word(std::string_view line, std::string_view word)
{
    return line.substr(0, word.size()) == word &&
           (line.size() == word.size() || !std::isalnum(static_cast<unsigned char>(line[word.size()])));
}

std::vector<std::vector<std::string>> parse_tuples(std::string_view s, std::size_t line)
{
    std::vector<std::vector<std::string>> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    for (;;) {
        skip_ws();
        if (i == s.size()) return out;
        if (s[i] != '(') fail(line, "expected '(' in tuple list");
        ++i;
        std::vector<std::string> tuple;
        std::string cur;
        bool closed = false;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c == ',' || c == ')') {
                auto name = std::string(trim(cur));
                if (!name.empty())
                    tuple.push_back(name);
                else if (c == ',' || !tuple.empty())
                    fail(line, "empty element name in tuple");
                cur.clear();
                if (c == ')') {
                    closed = true;
                    ++i;
                    break;
                }
            } else {
                cur += c;
            }
        }
        if (!closed) fail(line, "unterminated tuple");
        out.push_back(std::move(tuple));
    }
}

}  // namespace

Structure parse_structure(std::string_view text)
{
    auto lines = content_lines(text);
    if (lines.empty() || !starts_with_word(lines.front().second, "domain"))
        throw Error("structure text must start with a 'domain:' line");

    std::optional<Structure> st;
    for (auto [lineno, line] : lines) {
        auto colon = line.find(':');
        if (starts_with_word(line, "domain")) {
            if (st) fail(lineno, "domain declared twice");
            if (colon == std::string_view::npos) fail(lineno, "expected 'domain:'");
            auto names = words(line.substr(colon + 1));
            if (names.empty()) fail(lineno, "empty domain");
            try {
                st.emplace(std::move(names));
            } catch (const Error& e) {
                fail(lineno, e.what());
            }
        } else if (starts_with_word(line, "relation")) {
            if (colon == std::string_view::npos) fail(lineno, "expected ':' after relation header");
            auto header = trim(line.substr(8, colon - 8));
            auto slash = header.find('/');
            if (slash == std::string_view::npos) fail(lineno, "relation header must be NAME/ARITY");
            std::string name(trim(header.substr(0, slash)));
            std::size_t arity = 0;
            try {
                arity = std::stoul(std::string(trim(header.substr(slash + 1))));
            } catch (const std::exception&) {
                fail(lineno, "bad relation arity");
            }
            std::set<std::vector<Elem>> tuples;
            for (const auto& t : parse_tuples(line.substr(colon + 1), lineno)) {
                std::vector<Elem> ids;
                for (const auto& n : t) {
                    auto e = st->find_element(n);
                    if (!e) fail(lineno, "unknown domain element '" + n + "'");
                    ids.push_back(*e);
                }
                tuples.insert(std::move(ids));
            }
            try {
                st->add_relation(std::move(name), arity, std::move(tuples));
            } catch (const Error& e) {
                fail(lineno, e.what());
            }
        } else if (starts_with_word(line, "constant")) {
            auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(lineno, "expected 'constant NAME = ELEMENT'");
            std::string name(trim(line.substr(8, eq - 8)));
            std::string value(trim(line.substr(eq + 1)));
            if (name.empty()) fail(lineno, "missing constant name");
            auto e = st->find_element(value);
            if (!e) fail(lineno, "unknown domain element '" + value + "'");
            st->set_constant(std::move(name), *e);
        } else {
            fail(lineno, "unrecognized line");
        }
    }
    return std::move(*st);
}

std::string to_text(const Structure& s)
{
    std::string out = "domain:";
    for (const auto& n : s.element_names()) out += " " + n;
    out += '\n';
    for (const auto& r : s.relations()) {
        out += "relation " + r.name + "/" + std::to_string(r.arity) + ":";
        for (const auto& t : r.tuples) {
            out += " (";
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) out += ',';
                out += s.element_name(t[i]);
            }
            out += ')';
        }
        out += '\n';
    }
    for (const auto& [name, value] : s.constants()) out += "constant " + name + " = " + s.element_name(value) + "\n";
    return out;
}

Team parse_team(std::string_view text, const Structure& structure)
{
    auto lines = content_lines(text);
    if (lines.empty() || !starts_with_word(lines.front().second, "vars"))
        throw Error("team text must start with a 'vars:' line");
    auto header = lines.front().second;
    auto colon = header.find(':');
    if (colon == std::string_view::npos) fail(lines.front().first, "expected 'vars:'");
    auto scope = words(header.substr(colon + 1));

    std::vector<Team::Row> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        Team::Row row;
        if (line != "()") {
            for (const auto& w : words(line)) {
                auto e = structure.find_element(w);
                if (!e) fail(lineno, "unknown domain element '" + w + "'");
                row.push_back(*e);
            }
        }
        if (row.size() != scope.size())
            fail(lineno, "row has " + std::to_string(row.size()) + " values, scope has " + std::to_string(scope.size()));
        rows.push_back(std::move(row));
    }
    try {
        return Team(std::move(scope), std::move(rows));
    } catch (const Error& e) {
        fail(lines.front().first, e.what());
    }
}

std::string to_text(const Team& team, const Structure& structure)
{
    std::string out = "vars:";
    for (const auto& v : team.scope()) out += " " + v;
    out += '\n';
    for (const auto& r : team.rows()) {
        if (r.empty()) {
            out += "()\n";
            continue;
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ' ';
            out += structure.element_name(r[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace teamlogic
