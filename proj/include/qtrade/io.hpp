#pragma once
// Deterministic JSON and CSV emission. Numbers are printed with %.17g so a
// given (input, seed) pair always produces identical bytes; object keys keep
// insertion order.

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace qtrade {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class Json {
  public:
    static Json null() { return Json(Kind::null_value); }
    static Json boolean(bool v) {
        Json j(Kind::bool_value);
        j.bool_ = v;
        return j;
    }
    static Json number(double v) {
        Json j(Kind::number_value);
        j.num_ = v;
        return j;
    }
    static Json integer(std::int64_t v) {
        Json j(Kind::int_value);
        j.int_ = v;
        return j;
    }
    static Json uinteger(std::uint64_t v) {
        Json j(Kind::uint_value);
        j.uint_ = v;
        return j;
    }
    static Json string(std::string v) {
        Json j(Kind::string_value);
        j.str_ = std::move(v);
        return j;
    }
    static Json array() { return Json(Kind::array_value); }
    static Json object() { return Json(Kind::object_value); }

    Json& push(Json v) {
        require(Kind::array_value, "push");
        arr_.push_back(std::move(v));
        return *this;
    }

    Json& set(std::string key, Json v) {
        require(Kind::object_value, "set");
        obj_.emplace_back(std::move(key), std::move(v));
        return *this;
    }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        out.push_back('\n');
        return out;
    }

  private:
    enum class Kind {
        null_value,
        bool_value,
        number_value,
        int_value,
        uint_value,
        string_value,
        array_value,
        object_value
    };

    explicit Json(Kind k) : kind_(k) {}

    void require(Kind k, const char* op) const {
        if (kind_ != k) throw Error(std::string("Json::") + op + " on wrong value kind");
    }

    static void write_escaped(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char ch : s) {
            switch (ch) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                        out += buf;
                    } else {
                        out.push_back(ch);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        const std::string closing_pad(static_cast<std::size_t>(indent) * depth, ' ');
        switch (kind_) {
            case Kind::null_value: out += "null"; break;
            case Kind::bool_value: out += bool_ ? "true" : "false"; break;
            case Kind::number_value: out += format_double(num_); break;
            case Kind::int_value: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(int_));
                out += buf;
                break;
            }
            case Kind::uint_value: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(uint_));
                out += buf;
                break;
            }
            case Kind::string_value: write_escaped(out, str_); break;
            case Kind::array_value: {
                if (arr_.empty()) {
                    out += "[]";
                    break;
                }
                out += "[\n";
                for (std::size_t i = 0; i < arr_.size(); ++i) {
                    out += pad;
                    arr_[i].write(out, indent, depth + 1);
                    if (i + 1 < arr_.size()) out.push_back(',');
                    out.push_back('\n');
                }
                out += closing_pad;
                out.push_back(']');
                break;
            }
            case Kind::object_value: {
                if (obj_.empty()) {
                    out += "{}";
                    break;
                }
                out += "{\n";
                for (std::size_t i = 0; i < obj_.size(); ++i) {
                    out += pad;
                    write_escaped(out, obj_[i].first);
                    out += ": ";
                    obj_[i].second.write(out, indent, depth + 1);
                    if (i + 1 < obj_.size()) out.push_back(',');
                    out.push_back('\n');
                }
                out += closing_pad;
                out.push_back('}');
                break;
            }
        }
    }

    Kind kind_;
    bool bool_ = false;
    double num_ = 0.0;
    std::int64_t int_ = 0;
    std::uint64_t uint_ = 0;
    std::string str_;
    std::vector<Json> arr_;
    std::vector<std::pair<std::string, Json>> obj_;
};

// {"rows": r, "cols": c, "re": [...], "im": [...]} with row-major entries.
inline Json matrix_to_json(const ComplexMatrix& m) {
    Json j = Json::object();
    j.set("rows", Json::uinteger(m.rows()));
    j.set("cols", Json::uinteger(m.cols()));
    Json re = Json::array(), im = Json::array();
    for (const Complex& v : m.data()) {
        re.push(Json::number(v.real()));
        im.push(Json::number(v.imag()));
    }
    j.set("re", std::move(re));
    j.set("im", std::move(im));
    return j;
}

inline std::string csv_comment(std::uint64_t seed, std::uint64_t samples, const char* version) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# seed=%llu samples=%llu version=%s",
                  static_cast<unsigned long long>(seed), static_cast<unsigned long long>(samples),
                  version);
    return buf;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    return out;
}

}  // namespace qtrade
