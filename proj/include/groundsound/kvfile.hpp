/**
 * @file kvfile.hpp
 * @brief Sectioned key = value text format used by scenario files and the
 *        material database.
 *
 * Syntax:
 *   # comment (also allowed after a value)
 *   [section]
 *   key = value
 * Keys may repeat inside a section; the consumer decides whether that is
 * allowed. Errors carry the 1-based line number.
 */

#ifndef GROUNDSOUND_KVFILE_HPP
#define GROUNDSOUND_KVFILE_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "vec3.hpp"

namespace groundsound {

struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct KvSection {
    std::string name;
    int line = 0;
    std::vector<KvEntry> entries;

    const KvEntry* find(std::string_view key) const
    {
        const KvEntry* hit = nullptr;
        for (const auto& e : entries)
            if (e.key == key)
                hit = &e;
        return hit;
    }
    std::vector<const KvEntry*> find_all(std::string_view key) const
    {
        std::vector<const KvEntry*> out;
        for (const auto& e : entries)
            if (e.key == key)
                out.push_back(&e);
        return out;
    }
};

struct KvDocument {
    std::vector<KvSection> sections;

    const KvSection* section(std::string_view name) const
    {
        for (const auto& s : sections)
            if (s.name == name)
                return &s;
        return nullptr;
    }
    KvSection& section_or_add(std::string_view name)
    {
        for (auto& s : sections)
            if (s.name == name)
                return s;
        sections.push_back({std::string(name), 0, {}});
        return sections.back();
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

inline std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

inline std::string at_line(int line)
{
    return line > 0 ? "line " + std::to_string(line) + ": " : std::string("override: ");
}

} // namespace detail

inline KvDocument parse_kv(std::string_view text)
{
    KvDocument doc;
    KvSection* current = nullptr;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        const auto line = detail::trim(raw);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(detail::at_line(line_no) + "unterminated section header");
            const auto name = detail::lower(detail::trim(line.substr(1, line.size() - 2)));
            if (name.empty())
                throw ConfigError(detail::at_line(line_no) + "empty section name");
            if (doc.section(name))
                throw ConfigError(detail::at_line(line_no) + "duplicate section [" + name + "]");
            doc.sections.push_back({name, line_no, {}});
            current = &doc.sections.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(detail::at_line(line_no) + "expected 'key = value'");
        if (!current)
            throw ConfigError(detail::at_line(line_no) + "key outside of any [section]");
        const auto key = detail::lower(detail::trim(line.substr(0, eq)));
        const auto value = std::string(detail::trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(detail::at_line(line_no) + "empty key");
        if (value.empty())
            throw ConfigError(detail::at_line(line_no) + "empty value for '" + key + "'");
        current->entries.push_back({key, value, line_no});
    }
    return doc;
}

/// Apply "section.key=value". Replaces every existing occurrence of the key.
inline void apply_override(KvDocument& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw ConfigError("override '" + std::string(assignment) + "' must look like section.key=value");
    const auto section = detail::lower(detail::trim(assignment.substr(0, dot)));
    const auto key = detail::lower(detail::trim(assignment.substr(dot + 1, eq - dot - 1)));
    const auto value = std::string(detail::trim(assignment.substr(eq + 1)));
    if (section.empty() || key.empty() || value.empty())
        throw ConfigError("override '" + std::string(assignment) + "' has an empty part");
    auto& sec = doc.section_or_add(section);
    std::erase_if(sec.entries, [&](const KvEntry& e) { return e.key == key; });
    sec.entries.push_back({key, value, 0});
}

inline double parse_number(const KvEntry& e)
{
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(detail::at_line(e.line) + "'" + e.key + "' expects a number, got '" + e.value + "'");
    return v;
}

inline std::vector<double> parse_numbers(const KvEntry& e)
{
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) {
        KvEntry piece{e.key, tok, e.line};
        out.push_back(parse_number(piece));
    }
    return out;
}

inline Vec3 parse_vec3(const KvEntry& e)
{
    const auto v = parse_numbers(e);
    if (v.size() != 3)
        throw ConfigError(detail::at_line(e.line) + "'" + e.key + "' expects three numbers (x y z)");
    return {v[0], v[1], v[2]};
}

inline bool parse_bool(const KvEntry& e)
{
    const auto v = detail::lower(e.value);
    if (v == "true" || v == "yes" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "0" || v == "off")
        return false;
    throw ConfigError(detail::at_line(e.line) + "'" + e.key + "' expects true/false, got '" + e.value + "'");
}

/// Reject keys that are not in `allowed` and repeated keys not in `repeatable`.
inline void check_keys(const KvSection& s, std::initializer_list<std::string_view> allowed,
                       std::initializer_list<std::string_view> repeatable = {})
{
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
            throw ConfigError(detail::at_line(e.line) + "unknown key '" + e.key + "' in [" + s.name + "]");
        if (std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end())
            continue;
        for (std::size_t j = 0; j < i; ++j)
            if (s.entries[j].key == e.key)
                throw ConfigError(detail::at_line(e.line) + "key '" + e.key + "' given twice in [" + s.name + "]");
    }
}

} // namespace groundsound

#endif
