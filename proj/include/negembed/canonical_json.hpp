#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace negembed::json {

/// Minimal JSON document with canonical emission: object keys sorted,
/// floats printed with 17 significant digits, no whitespace. Two documents
/// with the same content always serialize to the same bytes.
class Value {
public:
    using Array = std::vector<Value>;
    using Object = std::map<std::string, Value>;

    Value() : v_(nullptr) {}
    Value(std::nullptr_t) : v_(nullptr) {}
    Value(bool b) : v_(b) {}
    Value(int i) : v_(static_cast<std::int64_t>(i)) {}
    Value(long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(long long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(unsigned long long u) : v_(static_cast<std::uint64_t>(u)) {}
    Value(std::uint64_t u) : v_(u) {}
    Value(double d) : v_(d) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(Array a) : v_(std::move(a)) {}
    Value(Object o) : v_(std::move(o)) {}

    static Value object() { return Value(Object{}); }
    static Value array() { return Value(Array{}); }

    Value& operator[](const std::string& key) {
        if (!std::holds_alternative<Object>(v_)) v_ = Object{};
        return std::get<Object>(v_)[key];
    }
    void push_back(Value v) {
        if (!std::holds_alternative<Array>(v_)) v_ = Array{};
        std::get<Array>(v_).push_back(std::move(v));
    }

    bool is_object() const { return std::holds_alternative<Object>(v_); }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }
    /// canonical single-line document with trailing newline
    std::string dump_line() const { return dump() + "\n"; }

private:
    std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string,
                 Array, Object>
        v_;

    static void write_string(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(v_)) {
            out += "null";
        } else if (std::holds_alternative<bool>(v_)) {
            out += std::get<bool>(v_) ? "true" : "false";
        } else if (std::holds_alternative<std::int64_t>(v_)) {
            out += std::to_string(std::get<std::int64_t>(v_));
        } else if (std::holds_alternative<std::uint64_t>(v_)) {
            out += std::to_string(std::get<std::uint64_t>(v_));
        } else if (std::holds_alternative<double>(v_)) {
            const double d = std::get<double>(v_);
            if (!std::isfinite(d)) {
                out += "null"; // reports must not carry non-finite payloads
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);
            out += buf;
        } else if (std::holds_alternative<std::string>(v_)) {
            write_string(out, std::get<std::string>(v_));
        } else if (std::holds_alternative<Array>(v_)) {
            out += '[';
            const auto& a = std::get<Array>(v_);
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (i) out += ',';
                a[i].write(out);
            }
            out += ']';
        } else {
            out += '{';
            const auto& o = std::get<Object>(v_);
            bool first = true;
            for (const auto& [k, val] : o) {
                if (!first) out += ',';
                first = false;
                write_string(out, k);
                out += ':';
                val.write(out);
            }
            out += '}';
        }
    }
};

inline Value from_span(std::span<const double> xs) {
    Value a = Value::array();
    for (double x : xs) a.push_back(x);
    return a;
}

} // namespace negembed::json
