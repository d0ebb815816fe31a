#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unseen/errors.hpp"

// Data model and ingestion: per-symbol histograms, fingerprints
// (count-of-counts), the word tokenizer, and the file parsers.

namespace unseen {

// Per-symbol occurrence counts; the sufficient statistic of a sample.
struct Histogram {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t n = 0;

    void add(std::string_view symbol, std::uint64_t count = 1) {
        if (count == 0) return;
        counts[std::string(symbol)] += count;
        n += count;
    }
};

inline Histogram build_histogram(const std::vector<std::string>& symbols) {
    Histogram h;
    for (const auto& s : symbols) h.add(s);
    return h;
}

// Count-of-counts: phi[j] symbols were seen exactly j times. Stored sparsely;
// real data has phi_j = 0 for most j.
struct Fingerprint {
    std::map<std::uint64_t, std::uint64_t> phi;
    std::uint64_t n = 0;

    // Number of distinct observed symbols (the plug-in support size).
    std::uint64_t distinct() const {
        std::uint64_t s = 0;
        for (const auto& [j, c] : phi) s += c;
        return s;
    }

    std::uint64_t at(std::uint64_t j) const {
        auto it = phi.find(j);
        return it == phi.end() ? 0 : it->second;
    }
};

inline Fingerprint build_fingerprint(const Histogram& h) {
    Fingerprint f;
    f.n = h.n;
    for (const auto& [sym, c] : h.counts) ++f.phi[c];
    return f;
}

// Lowercased maximal runs of ASCII letters; every other byte delimits.
// Input must be well-formed UTF-8 (multi-byte sequences are validated and
// treated as delimiters), so that byte-level scanning cannot split a
// non-ASCII character in half silently.
inline std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (std::isalpha(c)) {
                cur.push_back(static_cast<char>(std::tolower(c)));
            } else if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
            ++i;
            continue;
        }
        // Validate one UTF-8 multi-byte sequence.
        int len;
        if ((c & 0xE0) == 0xC0 && c >= 0xC2)
            len = 2;
        else if ((c & 0xF0) == 0xE0)
            len = 3;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
            len = 4;
        else
            throw parse_error("tokenize_words: invalid UTF-8 lead byte at offset " + std::to_string(i));
        if (i + len > text.size())
            throw parse_error("tokenize_words: truncated UTF-8 sequence at offset " + std::to_string(i));
        for (int k = 1; k < len; ++k)
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80)
                throw parse_error("tokenize_words: invalid UTF-8 continuation at offset " +
                                  std::to_string(i + k));
        if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
        i += len;
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

enum class InputFormat { counts, fingerprint, text };

inline InputFormat parse_format(std::string_view name) {
    if (name == "counts") return InputFormat::counts;
    if (name == "fingerprint") return InputFormat::fingerprint;
    if (name == "text") return InputFormat::text;
    throw parse_error("unknown input format '" + std::string(name) + "'");
}

namespace detail {

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

}  // namespace detail

// One record per line: symbol<TAB>count, count a positive decimal integer.
inline Fingerprint parse_counts(std::istream& in) {
    Histogram h;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        if (sv.empty()) continue;
        const auto tab = sv.find('\t');
        if (tab == std::string_view::npos)
            throw parse_error("counts: missing tab separator", lineno);
        const std::string_view sym = sv.substr(0, tab);
        const auto count = detail::parse_u64(sv.substr(tab + 1));
        if (sym.empty()) throw parse_error("counts: empty symbol", lineno);
        if (!count || *count == 0)
            throw parse_error("counts: count must be a positive integer", lineno);
        if (h.counts.contains(std::string(sym)))
            throw parse_error("counts: duplicate symbol '" + std::string(sym) + "'", lineno);
        h.add(sym, *count);
    }
    return build_fingerprint(h);
}

// One record per line: j<SPACE>Phi_j, both positive, strictly increasing j.
// Lines starting with '#' are comments; an optional "# n = <total>" comment
// declares the sample size, which is then checked against sum j*Phi_j.
inline Fingerprint parse_fingerprint(std::istream& in) {
    Fingerprint f;
    std::optional<std::uint64_t> declared_n;
    std::uint64_t last_j = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            sv.remove_prefix(1);
            sv = detail::trim(sv);
            if (sv.substr(0, 1) == "n") {
                sv = detail::trim(sv.substr(1));
                if (!sv.empty() && sv.front() == '=') {
                    const auto v = detail::parse_u64(detail::trim(sv.substr(1)));
                    if (!v) throw parse_error("fingerprint: malformed n declaration", lineno);
                    declared_n = *v;
                }
            }
            continue;
        }
        const auto space = sv.find(' ');
        if (space == std::string_view::npos)
            throw parse_error("fingerprint: expected 'j Phi_j'", lineno);
        const auto j = detail::parse_u64(detail::trim(sv.substr(0, space)));
        const auto c = detail::parse_u64(detail::trim(sv.substr(space + 1)));
        if (!j || *j == 0 || !c || *c == 0)
            throw parse_error("fingerprint: j and Phi_j must be positive integers", lineno);
        if (*j <= last_j)
            throw parse_error("fingerprint: multiplicities must be strictly increasing", lineno);
        last_j = *j;
        f.phi[*j] = *c;
        f.n += *j * *c;
    }
    if (declared_n && *declared_n != f.n)
        throw parse_error("fingerprint: declared n = " + std::to_string(*declared_n) +
                          " but sum of j*Phi_j is " + std::to_string(f.n));
    return f;
}

inline Fingerprint parse_text(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return build_fingerprint(build_histogram(tokenize_words(buf.str())));
}

inline Fingerprint parse_input(std::istream& in, InputFormat format) {
    switch (format) {
        case InputFormat::counts: return parse_counts(in);
        case InputFormat::fingerprint: return parse_fingerprint(in);
        case InputFormat::text: return parse_text(in);
    }
    throw parse_error("unreachable input format");
}

inline Fingerprint parse_input(const std::string& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return parse_input(in, format);
}

}  // namespace unseen
