#pragma once

#include <cstdint>
#include <regex>
#include <string>

// Diagnostic fingerprinting. Two compiler outputs that differ only in file
// paths, line/column numbers, or the generated names baked into a particular
// program should count as the same failure. Normalization rewrites those
// variable parts into fixed placeholders; the fingerprint is a 64-bit FNV-1a
// hash of the normalized text, printed as 16 hex digits.
//
// Placeholders:
//   <path>    file paths (with or without directories) and source file names
//   <loc>     :line[:col] suffixes attached to a <path>
//   line <n> / column <n>   spelled-out positions (Groovy style)
//   <id>      any 'single', "double" or `backtick` quoted token
//   <type>    generated type names   (A12, I3)
//   <func>    generated method names (func, func7)
//   <arg>     generated parameter names (arg0)
//   <tparam>  generated type parameters (T2)
//
// Names outside the generator's conventions (fixture names like Child or
// GrandParent) pass through untouched, so unrelated diagnostics keep
// distinct fingerprints.

namespace xlang::fp {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string toHex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

inline std::string normalizeDiagnostics(const std::string& raw) {
    static const std::regex kDirPath(
        R"([A-Za-z0-9_.~\-]*(?:/[A-Za-z0-9_.\-]+)+)");
    static const std::regex kBareSourceFile(
        R"(\b[A-Za-z0-9_\-]+\.(?:java|kt|kts|groovy|scala|class)\b)");
    static const std::regex kLoc(R"(<path>(\s*:\s*\d+)+)");
    static const std::regex kLine(R"(\bline\s+\d+\b)");
    static const std::regex kColumn(R"(\bcolumn\s+\d+\b)");
    static const std::regex kSingleQuoted(R"('[^'\n]*')");
    static const std::regex kDoubleQuoted(R"("[^"\n]*")");
    static const std::regex kBacktickQuoted(R"(`[^`\n]*`)");
    static const std::regex kTypeName(R"(\b[AI]\d+\b)");
    static const std::regex kFuncName(R"(\bfunc\d*\b)");
    static const std::regex kArgName(R"(\barg\d+\b)");
    static const std::regex kTypeParam(R"(\bT\d+\b)");
    static const std::regex kWhitespace(R"(\s+)");

    std::string s = std::regex_replace(raw, kDirPath, "<path>");
    s = std::regex_replace(s, kBareSourceFile, "<path>");
    s = std::regex_replace(s, kLoc, "<path><loc>");
    s = std::regex_replace(s, kLine, "line <n>");
    s = std::regex_replace(s, kColumn, "column <n>");
    s = std::regex_replace(s, kSingleQuoted, "<id>");
    s = std::regex_replace(s, kDoubleQuoted, "<id>");
    s = std::regex_replace(s, kBacktickQuoted, "<id>");
    s = std::regex_replace(s, kTypeName, "<type>");
    s = std::regex_replace(s, kFuncName, "<func>");
    s = std::regex_replace(s, kArgName, "<arg>");
    s = std::regex_replace(s, kTypeParam, "<tparam>");
    s = std::regex_replace(s, kWhitespace, " ");
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

inline std::string fingerprintDiagnostics(const std::string& raw) {
    return toHex16(fnv1a64(normalizeDiagnostics(raw)));
}

}  // namespace xlang::fp
