#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "vitalguard/errors.hpp"

namespace vitalguard {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Strict full-token parse; `what` names the field in error messages.
inline double parse_double(std::string_view token, std::string_view what) {
    std::string_view t = trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ParseError(std::string(what) + ": not a number: \"" + std::string(token) + "\"");
    return value;
}

inline std::int64_t parse_i64(std::string_view token, std::string_view what) {
    std::string_view t = trim(token);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ParseError(std::string(what) + ": not an integer: \"" + std::string(token) + "\"");
    return value;
}

inline std::uint64_t parse_u64(std::string_view token, std::string_view what) {
    std::string_view t = trim(token);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ParseError(std::string(what) + ": not an unsigned integer: \"" + std::string(token) +
                         "\"");
    return value;
}

// Fixed-point with at most `max_frac` fraction digits, trailing zeros trimmed.
inline std::string format_trimmed(double v, int max_frac) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", max_frac, v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

// Shortest decimal form that round-trips a double exactly.
inline std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace vitalguard
