#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "grapple/graphcore.hpp"

namespace grapple::detail {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    explicit Cursor(const std::string& str) : s(str) {}

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        ws();
        return i < s.size() && s[i] == c;
    }
    bool peek_word(const std::string& w) {
        ws();
        return s.compare(i, w.size(), w) == 0;
    }
    void expect(char c) {
        ws();
        if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
        ++i;
    }
    void expect_word(const std::string& w) {
        ws();
        if (s.compare(i, w.size(), w) != 0) throw ParseError("expected '" + w + "'", i);
        i += w.size();
    }
    long integer() {
        ws();
        std::size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        std::size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (digits == i) throw ParseError("expected integer", start);
        return std::stol(s.substr(start, i - start));
    }
    bool at_end() {
        ws();
        return i >= s.size();
    }
    long keyed_int(const std::string& key) {
        expect_word(key);
        expect('=');
        return integer();
    }
    std::vector<std::pair<int, int>> pair_list() {
        std::vector<std::pair<int, int>> out;
        expect('[');
        if (peek(']')) {
            expect(']');
            return out;
        }
        for (;;) {
            expect('(');
            long a = integer();
            expect(',');
            long b = integer();
            expect(')');
            out.push_back({static_cast<int>(a), static_cast<int>(b)});
            if (peek(',')) {
                expect(',');
                continue;
            }
            break;
        }
        expect(']');
        return out;
    }
    std::vector<int> int_list() {
        std::vector<int> out;
        expect('[');
        if (peek(']')) {
            expect(']');
            return out;
        }
        for (;;) {
            out.push_back(static_cast<int>(integer()));
            if (peek(',')) {
                expect(',');
                continue;
            }
            break;
        }
        expect(']');
        return out;
    }
};

inline std::string pair_list_str(const std::vector<std::pair<int, int>>& v) {
    std::string s = "[";
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) s += ',';
        s += "(" + std::to_string(v[j].first) + "," + std::to_string(v[j].second) + ")";
    }
    return s + "]";
}

inline std::string int_list_str(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(v[j]);
    }
    return s + "]";
}

/// Sign of the permutation taking sequence `from` to sequence `to`
/// (same distinct atoms).
int relative_sign(const std::vector<long>& from, const std::vector<long>& to);

}  // namespace grapple::detail
