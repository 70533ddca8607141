#pragma once

#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir_json.hpp"

namespace testutil {

namespace fs = std::filesystem;

inline fs::path repoDir() { return fs::path(XLANG_REPO_DIR); }
inline fs::path fixturesDir() { return repoDir() / "tests" / "fixtures"; }

inline std::string readFile(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw xlang::Error("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void writeFile(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// Fresh scratch directory per test; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = fs::temp_directory_path() /
                ("xlang-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline xlang::ir::IrProgram loadFixtureProgram(const std::string& name) {
    return xlang::ir::programFromText(
        readFile(fixturesDir() / "programs" / (name + ".json")));
}

// Language-agnostic token stream: identifiers/numbers as units, every other
// non-space character as a single-char token, comments dropped.
inline std::vector<std::string> tokenize(const std::string& source) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();
    while (i < n) {
        char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') ++i;
        } else if (c == '/' && i + 1 < n && source[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(source[i] == '*' && source[i + 1] == '/')) ++i;
            i += 2;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(source[i])) ||
                             source[i] == '_'))
                ++i;
            tokens.push_back(source.substr(start, i - start));
        } else {
            tokens.push_back(std::string(1, c));
            ++i;
        }
    }
    return tokens;
}

// ------------------------------------------------------------- builders ----

using namespace xlang::ir;

inline TypeDecl mkClass(std::string name, Lang lang,
                        ClassModifier mod = ClassModifier::Open) {
    TypeDecl d;
    d.name = std::move(name);
    d.kind = DeclKind::Class;
    d.modifier = mod;
    d.lang = lang;
    return d;
}

inline TypeDecl mkInterface(std::string name, Lang lang) {
    TypeDecl d;
    d.name = std::move(name);
    d.kind = DeclKind::Interface;
    d.lang = lang;
    return d;
}

inline MethodDecl mkMethod(std::string name, MethodKind kind,
                           std::vector<TypeRef> paramTypes = {},
                           TypeRef ret = unitType(),
                           std::vector<OverrideRef> overrides = {}) {
    MethodDecl m;
    m.name = std::move(name);
    m.kind = kind;
    for (std::size_t i = 0; i < paramTypes.size(); ++i)
        m.params.push_back({"arg" + std::to_string(i), paramTypes[i]});
    m.returnType = std::move(ret);
    m.overrides = std::move(overrides);
    return m;
}

}  // namespace testutil
