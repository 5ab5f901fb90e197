#include "kron/rational.hpp"

#include <cctype>

namespace kron {

Rat parse_rat(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) {
        throw Error(ErrorCode::ParseError, "empty rational literal");
    }
    std::size_t pos = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    bool seen_digit = false;
    bool seen_slash = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
        } else if (c == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
            if (pos + 1 < s.size() && (s[pos + 1] == '+' || s[pos + 1] == '-')) ++pos;
        } else {
            throw Error(ErrorCode::ParseError, "bad rational literal: " + text);
        }
    }
    if (!seen_digit || s.back() == '/') {
        throw Error(ErrorCode::ParseError, "bad rational literal: " + text);
    }
    Rat r;
    if (r.set_str(s, 10) != 0) {
        throw Error(ErrorCode::ParseError, "bad rational literal: " + text);
    }
    if (r.get_den() == 0) {
        throw Error(ErrorCode::ParseError, "zero denominator: " + text);
    }
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    return r.get_str();
}

}  // namespace kron
