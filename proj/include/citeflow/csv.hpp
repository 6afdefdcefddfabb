#pragma once

// Minimal RFC 4180 reader/writer: comma separator, double-quote quoting,
// doubled quotes inside quoted fields, LF or CRLF record terminators.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "citeflow/error.hpp"

namespace citeflow::csv {

struct Record {
    std::size_t line = 0;  // 1-based line on which the record starts
    std::vector<std::string> fields;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record; returns false at end of input.
    bool next(Record& out) {
        out.fields.clear();
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) return false;
        out.line = line_;
        std::string field;
        bool quoted = false;
        bool after_quote = false;
        for (;; c = in_.get()) {
            if (c == std::char_traits<char>::eof()) {
                if (quoted) throw ParseError(out.line, "unterminated quoted field");
                out.fields.push_back(std::move(field));
                return true;
            }
            const char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
                continue;
            }
            if (ch == ',') {
                out.fields.push_back(std::move(field));
                field.clear();
                after_quote = false;
            } else if (ch == '\n' || ch == '\r') {
                if (ch == '\r' && in_.peek() == '\n') in_.get();
                ++line_;
                out.fields.push_back(std::move(field));
                return true;
            } else if (ch == '"' && field.empty() && !after_quote) {
                quoted = true;
            } else {
                if (after_quote) throw ParseError(line_, "text after closing quote");
                field.push_back(ch);
            }
        }
    }

private:
    std::istream& in_;
    std::size_t line_ = 1;
};

/// A line holding nothing at all.
inline bool is_blank(const Record& r) { return r.fields.size() == 1 && r.fields[0].empty(); }

inline std::string escape(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

/// Reads the header row and checks it matches `expected` exactly.
inline void expect_header(Reader& reader, const std::vector<std::string>& expected) {
    Record header;
    if (!reader.next(header)) throw ParseError(1, "missing header");
    if (!header.fields.empty() && header.fields[0].starts_with("\xEF\xBB\xBF")) {
        header.fields[0].erase(0, 3);
    }
    if (header.fields != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        throw ParseError(header.line, "expected header '" + want + "'");
    }
}

}  // namespace citeflow::csv
