// Strict reader for the TOML subset of the model files.

#include "frobsurf/tomlmini.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace frobsurf {
namespace toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

bool bare_key_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_' || c == '-';
}

// Split "a.b.c" on dots; keys are bare (quoted keys are not supported).
std::vector<std::string> split_key_path(const std::string& s, int line) {
    std::vector<std::string> path;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            if (cur.empty()) fail(line, "empty key segment in '" + s + "'");
            path.push_back(cur);
            cur.clear();
        } else if (bare_key_char(c)) {
            cur += c;
        } else if (c == ' ' || c == '\t') {
            if (!cur.empty()) fail(line, "whitespace inside key '" + s + "'");
        } else {
            fail(line, std::string("unsupported character '") + c + "' in key '" + s + "'");
        }
    }
    if (cur.empty()) fail(line, "empty key segment in '" + s + "'");
    path.push_back(cur);
    return path;
}

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line;
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    char take() { return pos < text.size() ? text[pos++] : '\0'; }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() const { return pos >= text.size(); }
};

ValuePtr parse_scalar(Cursor& c);

ValuePtr parse_array(Cursor& c) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Array;
    v->line = c.line;
    c.take();  // '['
    c.skip_ws();
    if (c.peek() == ']') {
        c.take();
        return v;
    }
    for (;;) {
        c.skip_ws();
        v->items.push_back(parse_scalar(c));
        if (v->items.size() > 1 && v->items.back()->kind != v->items.front()->kind)
            fail(c.line, "mixed value types in array");
        c.skip_ws();
        char ch = c.take();
        if (ch == ']') return v;
        if (ch != ',') fail(c.line, "expected ',' or ']' in array");
        c.skip_ws();
        if (c.peek() == ']') {  // trailing comma
            c.take();
            return v;
        }
    }
}

ValuePtr parse_scalar(Cursor& c) {
    c.skip_ws();
    char ch = c.peek();
    if (ch == '[') return parse_array(c);
    auto v = std::make_shared<Value>();
    v->line = c.line;
    if (ch == '"') {
        c.take();
        v->kind = Value::Kind::String;
        for (;;) {
            if (c.done()) fail(c.line, "unterminated string");
            char d = c.take();
            if (d == '"') break;
            if (d == '\\') {
                char e = c.take();
                switch (e) {
                    case '"': v->str += '"'; break;
                    case '\\': v->str += '\\'; break;
                    case 'n': v->str += '\n'; break;
                    case 't': v->str += '\t'; break;
                    default: fail(c.line, std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                v->str += d;
            }
        }
        return v;
    }
    if (ch == 't' || ch == 'f') {
        std::string word;
        while (std::isalpha((unsigned char)c.peek())) word += c.take();
        if (word == "true" || word == "false") {
            v->kind = Value::Kind::Boolean;
            v->boolean = word == "true";
            return v;
        }
        fail(c.line, "unrecognised value '" + word + "'");
    }
    if (ch == '+' || ch == '-' || std::isdigit((unsigned char)ch)) {
        std::string num;
        if (ch == '+' || ch == '-') num += c.take();
        while (std::isdigit((unsigned char)c.peek())) num += c.take();
        if (num.empty() || num == "+" || num == "-") fail(c.line, "malformed integer");
        if (std::isalpha((unsigned char)c.peek()) || c.peek() == '.')
            fail(c.line, "only plain integers are supported");
        v->kind = Value::Kind::Integer;
        v->integer = std::stoll(num);
        return v;
    }
    fail(c.line, "unrecognised value");
}

// Strip a trailing comment (a '#' outside of any string).
std::string strip_comment(const std::string& line, int lineno) {
    std::string out;
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_str) {
            out += c;
            if (c == '\\' && i + 1 < line.size()) {
                out += line[++i];
            } else if (c == '"') {
                in_str = false;
            }
        } else if (c == '"') {
            in_str = true;
            out += c;
        } else if (c == '#') {
            return out;
        } else {
            out += c;
        }
    }
    if (in_str) fail(lineno, "unterminated string");
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Walk (and create) tables along a dotted path, descending into the last
// element of any array-of-tables met on the way.
Value* descend(Value* node, const std::vector<std::string>& path, size_t upto, int line) {
    for (size_t i = 0; i < upto; ++i) {
        const std::string& key = path[i];
        auto it = node->entries.find(key);
        if (it == node->entries.end()) {
            auto t = std::make_shared<Value>();
            t->kind = Value::Kind::Table;
            t->line = line;
            node->entries[key] = t;
            node->order.push_back(key);
            node = t.get();
        } else if (it->second->is_table()) {
            node = it->second.get();
        } else if (it->second->is_array() && !it->second->items.empty() &&
                   it->second->items.back()->is_table()) {
            node = it->second->items.back().get();
        } else {
            fail(line, "'" + key + "' is not a table");
        }
    }
    return node;
}

}  // namespace

bool Value::has(const std::string& key) const { return entries.count(key) != 0; }

const Value* Value::find(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : it->second.get();
}

const Value& Value::at(const std::string& key) const {
    const Value* v = find(key);
    if (!v) fail(line, "missing key '" + key + "'");
    return *v;
}

const std::string& Value::as_string() const {
    if (kind != Kind::String) fail(line, "expected a string value");
    return str;
}

long long Value::as_integer() const {
    if (kind != Kind::Integer) fail(line, "expected an integer value");
    return integer;
}

bool Value::as_boolean() const {
    if (kind != Kind::Boolean) fail(line, "expected a boolean value");
    return boolean;
}

const std::vector<ValuePtr>& Value::as_array() const {
    if (kind != Kind::Array) fail(line, "expected an array value");
    return items;
}

std::vector<std::string> Value::as_string_array() const {
    std::vector<std::string> out;
    for (const auto& it : as_array()) out.push_back(it->as_string());
    return out;
}

Value parse(const std::string& text) {
    Value root;
    root.kind = Value::Kind::Table;
    root.line = 1;
    Value* current = &root;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw, lineno));
        if (line.empty()) continue;
        if (line.front() == '[') {
            bool aot = line.size() > 1 && line[1] == '[';
            std::string close = aot ? "]]" : "]";
            size_t end = line.rfind(close);
            if (end == std::string::npos || end + close.size() != line.size())
                fail(lineno, "malformed table header");
            std::string inner = trim(line.substr(aot ? 2 : 1, end - (aot ? 2 : 1)));
            auto path = split_key_path(inner, lineno);
            Value* parent = descend(&root, path, path.size() - 1, lineno);
            const std::string& last = path.back();
            auto it = parent->entries.find(last);
            if (aot) {
                if (it == parent->entries.end()) {
                    auto arr = std::make_shared<Value>();
                    arr->kind = Value::Kind::Array;
                    arr->line = lineno;
                    parent->entries[last] = arr;
                    parent->order.push_back(last);
                    it = parent->entries.find(last);
                } else if (!it->second->is_array() ||
                           (!it->second->items.empty() && !it->second->items.back()->is_table())) {
                    fail(lineno, "'" + last + "' is not an array of tables");
                }
                auto t = std::make_shared<Value>();
                t->kind = Value::Kind::Table;
                t->line = lineno;
                it->second->items.push_back(t);
                current = t.get();
            } else {
                if (it != parent->entries.end()) fail(lineno, "duplicate table '" + inner + "'");
                auto t = std::make_shared<Value>();
                t->kind = Value::Kind::Table;
                t->line = lineno;
                parent->entries[last] = t;
                parent->order.push_back(last);
                current = t.get();
            }
            continue;
        }
        size_t eq = std::string::npos;
        {
            bool in_str = false;
            for (size_t i = 0; i < line.size() && eq == std::string::npos; ++i) {
                if (line[i] == '"') in_str = !in_str;
                if (line[i] == '=' && !in_str) eq = i;
            }
        }
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        auto path = split_key_path(trim(line.substr(0, eq)), lineno);
        std::string rhs = trim(line.substr(eq + 1));
        if (rhs.empty()) fail(lineno, "missing value");
        Cursor c{rhs, 0, lineno};
        ValuePtr v = parse_scalar(c);
        c.skip_ws();
        if (!c.done()) fail(lineno, "trailing characters after value");
        Value* parent = descend(current, path, path.size() - 1, lineno);
        const std::string& last = path.back();
        if (parent->entries.count(last)) fail(lineno, "duplicate key '" + last + "'");
        parent->entries[last] = v;
        parent->order.push_back(last);
    }
    return root;
}

Value parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace toml
}  // namespace frobsurf
