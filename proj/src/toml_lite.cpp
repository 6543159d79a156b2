#include "toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "ntstsm/errors.hpp"

namespace ntstsm::toml_lite {

using nlohmann::json;

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : src_(text) {}

    json parse() {
        root_ = json::object();
        current_ = &root_;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                parse_table_header();
            } else {
                parse_key_value(*current_);
                expect_line_end();
            }
        }
        return root_;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("TOML line " + std::to_string(line_) + ": " + msg);
    }

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    char get() {
        const char c = src_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (!eof() && peek() == '#') {
            while (!eof() && peek() != '\n') ++pos_;
        }
    }

    void skip_blank_lines() {
        while (!eof()) {
            skip_ws();
            skip_comment();
            if (!eof() && peek() == '\n') {
                get();
                continue;
            }
            break;
        }
    }

    void expect_line_end() {
        skip_ws();
        skip_comment();
        if (eof()) return;
        if (peek() != '\n') fail("unexpected trailing characters");
        get();
    }

    std::string parse_key_part() {
        skip_ws();
        if (eof()) fail("expected key");
        if (peek() == '"' || peek() == '\'') return parse_string();
        std::string key;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(c);
                ++pos_;
            } else {
                break;
            }
        }
        if (key.empty()) fail("empty key");
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{parse_key_part()};
        skip_ws();
        while (!eof() && peek() == '.') {
            ++pos_;
            parts.push_back(parse_key_part());
            skip_ws();
        }
        return parts;
    }

    void parse_table_header() {
        get();  // '['
        const bool array_table = !eof() && peek() == '[';
        if (array_table) get();
        const std::vector<std::string> parts = parse_dotted_key();
        skip_ws();
        if (eof() || get() != ']') fail("expected ']' in table header");
        if (array_table && (eof() || get() != ']')) fail("expected ']]' in table header");
        expect_line_end();

        json* node = &root_;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const bool last = (i + 1 == parts.size());
            json& slot = (*node)[parts[i]];
            if (last && array_table) {
                if (slot.is_null()) slot = json::array();
                if (!slot.is_array()) fail("redefinition of key '" + parts[i] + "'");
                slot.push_back(json::object());
                node = &slot.back();
            } else {
                if (slot.is_null()) slot = json::object();
                if (slot.is_array()) node = &slot.back();
                else if (slot.is_object()) node = &slot;
                else fail("key '" + parts[i] + "' is not a table");
            }
        }
        current_ = node;
    }

    void parse_key_value(json& table) {
        const std::vector<std::string> parts = parse_dotted_key();
        skip_ws();
        if (eof() || get() != '=') fail("expected '=' after key");
        skip_ws();
        json value = parse_value();
        json* node = &table;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            json& slot = (*node)[parts[i]];
            if (slot.is_null()) slot = json::object();
            if (!slot.is_object()) fail("key '" + parts[i] + "' is not a table");
            node = &slot;
        }
        if (node->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
        (*node)[parts.back()] = std::move(value);
    }

    json parse_value() {
        if (eof()) fail("expected value");
        const char c = peek();
        if (c == '"' || c == '\'') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        return parse_scalar();
    }

    std::string parse_string() {
        const char quote = get();
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string");
            char c = get();
            if (c == quote) break;
            if (c == '\n') fail("newline in string");
            if (quote == '"' && c == '\\') {
                if (eof()) fail("dangling escape");
                const char e = get();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    json parse_array() {
        get();  // '['
        json arr = json::array();
        while (true) {
            skip_blank_lines();
            skip_ws();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                get();
                break;
            }
            arr.push_back(parse_value());
            skip_blank_lines();
            skip_ws();
            if (eof()) fail("unterminated array");
            if (peek() == ',') {
                get();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        return arr;
    }

    json parse_inline_table() {
        get();  // '{'
        json obj = json::object();
        skip_ws();
        if (!eof() && peek() == '}') {
            get();
            return obj;
        }
        while (true) {
            parse_key_value(obj);
            skip_ws();
            if (eof()) fail("unterminated inline table");
            const char c = get();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}' in inline table");
            skip_ws();
        }
        return obj;
    }

    json parse_scalar() {
        std::string tok;
        while (!eof()) {
            const char c = peek();
            if (c == '\n' || c == ',' || c == ']' || c == '}' || c == '#' || c == ' ' ||
                c == '\t') {
                break;
            }
            tok.push_back(c);
            ++pos_;
        }
        if (tok == "true") return true;
        if (tok == "false") return false;
        std::string digits;
        digits.reserve(tok.size());
        for (char c : tok) {
            if (c != '_') digits.push_back(c);
        }
        const bool looks_float = digits.find_first_of(".eEnN") != std::string::npos;
        if (!looks_float) {
            std::int64_t iv = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
            if (ec == std::errc() && p == digits.data() + digits.size()) return iv;
        }
        double dv = 0.0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
        if (ec == std::errc() && p == digits.data() + digits.size()) return dv;
        fail("cannot parse value '" + tok + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    json root_;
    json* current_ = nullptr;
};

}  // namespace

json parse(const std::string& text) {
    return Parser(text).parse();
}

}  // namespace ntstsm::toml_lite
