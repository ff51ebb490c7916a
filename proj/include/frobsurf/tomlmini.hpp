#pragma once
// A small strict reader for the TOML subset used by the model files:
// [table] and [[array-of-tables]] headers with dotted paths, key = value
// pairs with string / integer / boolean / flat-array values, and # comments.
// No floats, dates, inline tables or multi-line constructs.  Errors are
// ParseError with the offending line number.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frobsurf/common.hpp"

namespace frobsurf {
namespace toml {

struct Value;
using ValuePtr = std::shared_ptr<Value>;

struct Value {
    enum class Kind { Table, Array, String, Integer, Boolean };
    Kind kind = Kind::Table;
    std::string str;
    long long integer = 0;
    bool boolean = false;
    std::vector<ValuePtr> items;              // arrays and arrays of tables
    std::map<std::string, ValuePtr> entries;  // tables
    std::vector<std::string> order;           // key definition order
    int line = 0;

    bool is_table() const { return kind == Kind::Table; }
    bool is_array() const { return kind == Kind::Array; }
    bool has(const std::string& key) const;
    // typed accessors; ParseError (with the line) on missing key / wrong type
    const Value& at(const std::string& key) const;
    const Value* find(const std::string& key) const;  // nullptr when absent
    const std::string& as_string() const;
    long long as_integer() const;
    bool as_boolean() const;
    const std::vector<ValuePtr>& as_array() const;
    std::vector<std::string> as_string_array() const;
};

// Parse a complete document into its root table.
Value parse(const std::string& text);
Value parse_file(const std::string& path);

}  // namespace toml
}  // namespace frobsurf
