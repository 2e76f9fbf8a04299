#include "scelab/config.hpp"

#include "scelab/error.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>

namespace scelab {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Drops a trailing comment, respecting quotes.
std::string_view strip_comment(std::string_view s)
{
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::string parse_scalar(std::string_view s, std::size_t line)
{
    s = trim(s);
    if (s.empty()) throw ParseError("empty value", line);
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ParseError("unterminated string", line);
        const auto inner = s.substr(1, s.size() - 2);
        if (inner.find('"') != std::string_view::npos) throw ParseError("stray quote in string", line);
        return std::string(inner);
    }
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '[' || c == ']' || c == ',')
            throw ParseError("unquoted value '" + std::string(s) + "' has invalid characters", line);
    return std::string(s);
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse(in);
}

ConfigDocument ConfigDocument::parse(std::istream& in)
{
    ConfigDocument doc;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto body = trim(strip_comment(raw));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line);
        const std::string key(trim(body.substr(0, eq)));
        if (key.empty()) throw ParseError("missing key", line);
        for (char c : key)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
                throw ParseError("invalid key '" + key + "'", line);
        if (doc.values_.count(key)) throw ParseError("duplicate key '" + key + "'", line);

        ConfigValue v;
        v.line = line;
        auto value = trim(body.substr(eq + 1));
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') throw ParseError("unterminated list", line);
            v.is_list = true;
            auto inner = trim(value.substr(1, value.size() - 2));
            while (!inner.empty()) {
                std::size_t cut = 0;
                bool quoted = false;
                while (cut < inner.size() && (quoted || inner[cut] != ',')) {
                    if (inner[cut] == '"') quoted = !quoted;
                    ++cut;
                }
                v.items.push_back(parse_scalar(inner.substr(0, cut), line));
                if (cut == inner.size()) break;
                inner = trim(inner.substr(cut + 1));
                if (inner.empty()) throw ParseError("trailing comma in list", line);
            }
        } else {
            v.items.push_back(parse_scalar(value, line));
        }
        doc.values_.emplace(key, std::move(v));
    }
    return doc;
}

const ConfigValue& ConfigDocument::at(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

std::size_t ConfigDocument::line(const std::string& key) const { return at(key).line; }

std::string ConfigDocument::get_string(const std::string& key) const
{
    const auto& v = at(key);
    if (v.is_list) throw ParseError("'" + key + "' must be a single value", v.line);
    return v.items.front();
}

namespace {

double to_number(const std::string& text, const std::string& key, std::size_t line)
{
    double x = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (ec != std::errc{} || ptr != end) throw ParseError("'" + key + "' expects a number, got '" + text + "'", line);
    return x;
}

}  // namespace

double ConfigDocument::get_number(const std::string& key) const
{
    return to_number(get_string(key), key, line(key));
}

std::uint64_t ConfigDocument::get_u64(const std::string& key) const
{
    const auto text = get_string(key);
    std::uint64_t x = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("'" + key + "' expects a nonnegative integer, got '" + text + "'", line(key));
    return x;
}

std::size_t ConfigDocument::get_count(const std::string& key) const
{
    return static_cast<std::size_t>(get_u64(key));
}

bool ConfigDocument::get_bool(const std::string& key) const
{
    const auto text = get_string(key);
    if (text == "true") return true;
    if (text == "false") return false;
    throw ParseError("'" + key + "' expects true or false", line(key));
}

std::vector<std::string> ConfigDocument::get_list(const std::string& key) const
{
    return at(key).items;
}

std::vector<double> ConfigDocument::get_number_list(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& item : at(key).items) out.push_back(to_number(item, key, line(key)));
    return out;
}

}  // namespace scelab
