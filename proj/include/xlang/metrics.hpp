#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "xlang/errors.hpp"
#include "xlang/ir.hpp"

// Structural metrics over the supertype DAG. Programs are assumed acyclic
// (validate first); a cycle raises Error instead of hanging.
//
// Depth counts inheritance levels including the implicit root class every
// class sits under: a lone class is depth 1, a lone interface contributes 0,
// and each explicit supertype edge adds one level. Width is the largest
// direct-supertype count of any declaration.

namespace xlang::ir {

namespace detail {

inline int declDepth(const IrProgram& program, const TypeDecl& decl,
                     std::map<std::string, int>& memo,
                     std::set<std::string>& onPath) {
    auto it = memo.find(decl.name);
    if (it != memo.end()) return it->second;
    if (!onPath.insert(decl.name).second)
        throw Error("supertype cycle through " + decl.name);
    int depth = decl.kind == DeclKind::Class ? 1 : 0;
    for (const auto& super : decl.supertypes) {
        const TypeDecl* target = program.findDecl(super.target);
        if (!target) throw UnresolvedSupertypeError(super.target);
        depth = std::max(depth, 1 + declDepth(program, *target, memo, onPath));
    }
    onPath.erase(decl.name);
    memo[decl.name] = depth;
    return depth;
}

}  // namespace detail

inline int inheritanceDepth(const IrProgram& program) {
    std::map<std::string, int> memo;
    std::set<std::string> onPath;
    int depth = 0;
    for (const auto& d : program.declarations)
        depth = std::max(depth, detail::declDepth(program, d, memo, onPath));
    return depth;
}

inline int inheritanceWidth(const IrProgram& program) {
    std::size_t width = 0;
    for (const auto& d : program.declarations)
        width = std::max(width, d.supertypes.size());
    return static_cast<int>(width);
}

inline bool isCrossLanguage(const IrProgram& program) {
    std::set<Lang> langs;
    for (const auto& d : program.declarations) langs.insert(d.lang);
    return langs.size() >= 2;
}

namespace detail {

inline bool typeUsesGenerics(const TypeRef& t) {
    return t.kind == TypeKind::ClassType && !t.args.empty();
}

}  // namespace detail

inline bool isGenericsRelated(const IrProgram& program) {
    for (const auto& d : program.declarations) {
        if (!d.typeParams.empty()) return true;
        for (const auto& s : d.supertypes)
            if (!s.args.empty()) return true;
        for (const auto& m : d.methods) {
            if (detail::typeUsesGenerics(m.returnType)) return true;
            for (const auto& p : m.params)
                if (detail::typeUsesGenerics(p.type)) return true;
        }
    }
    return false;
}

// Number of supertype edges whose two endpoints carry different language
// tags. Monotonically non-increasing under language flattening.
inline int languageSwitchCount(const IrProgram& program) {
    int switches = 0;
    for (const auto& d : program.declarations)
        for (const auto& super : d.supertypes) {
            const TypeDecl* target = program.findDecl(super.target);
            if (target && target->lang != d.lang) ++switches;
        }
    return switches;
}

}  // namespace xlang::ir
