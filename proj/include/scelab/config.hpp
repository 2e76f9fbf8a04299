#pragma once

// Flat `key = value` configuration documents.
//
//   # comment
//   extends = "paper-base"
//   efforts = [0.5, 0.6]
//   mechanisms = ["sc:50", "oa", "fmi:kl"]
//
// Values are numbers, booleans, bare words, double-quoted strings, or
// one-level lists of those. Keys may appear once.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scelab {

struct ConfigValue {
    std::vector<std::string> items;  // one item for scalars
    bool is_list = false;
    std::size_t line = 0;
};

class ConfigDocument {
public:
    static ConfigDocument parse(std::istream& in);
    static ConfigDocument parse(std::string_view text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, ConfigValue>& values() const { return values_; }
    std::size_t line(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;
    std::size_t get_count(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<double> get_number_list(const std::string& key) const;

private:
    const ConfigValue& at(const std::string& key) const;
    std::map<std::string, ConfigValue> values_;
};

}  // namespace scelab
