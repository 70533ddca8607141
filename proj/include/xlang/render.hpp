#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/validate.hpp"

// Source renderers. Each declaration becomes one file under src/, so a
// program mixing languages turns into a set of compilation units the harness
// can feed to the right compilers.
//
// Conventions that keep one IR meaning the same thing everywhere:
//  * Top is java.lang.Object in Java/Groovy/Scala and Any in Kotlin; Unit is
//    void/Unit and only ever appears as a whole return type.
//  * Java and Groovy reorder supertypes into extends/implements form; Kotlin
//    and Scala preserve the IR order (which is what makes supertype-order
//    mutations visible to their compilers at all).
//  * Method bodies are minimal type-correct stubs - the toolkit only
//    compiles, it never runs the programs.
//
// With kotlinNullableRefs on (the default), Kotlin renders reference types -
// Top, String and class types, including in type-argument positions - as
// nullable. Generated bodies can then return null instead of needing casts,
// which reads closer to hand-written Kotlin. Fixture goldens use the plain
// style, so tests turn the option off.

namespace xlang::render {

struct RenderOptions {
    bool kotlinNullableRefs = true;
};

struct SourceFile {
    std::string path;
    ir::Lang lang;
    std::string decl;
    std::string content;
};

struct SourceBundle {
    ir::IrProgram program;
    std::vector<SourceFile> files;
};

inline std::string fileExtension(ir::Lang lang) {
    switch (lang) {
        case ir::Lang::Java: return "java";
        case ir::Lang::Kotlin: return "kt";
        case ir::Lang::Groovy: return "groovy";
        case ir::Lang::Scala: return "scala";
    }
    return "txt";
}

namespace detail {

template <typename Fn>
inline void forEachTypeNode(const ir::TypeRef& t, Fn&& fn) {
    fn(t);
    for (const auto& a : t.args) forEachTypeNode(a, fn);
}

// Externals referenced by a declaration, in declaration order of the
// externals table, for deterministic import lines.
inline std::vector<ir::ExternalType> referencedExternals(const ir::TypeDecl& d) {
    std::set<std::string> names;
    auto visit = [&](const ir::TypeRef& t) {
        if (t.kind == ir::TypeKind::ClassType) names.insert(t.name);
    };
    for (const auto& s : d.supertypes)
        for (const auto& a : s.args) forEachTypeNode(a, visit);
    for (const auto& m : d.methods) {
        for (const auto& p : m.params) forEachTypeNode(p.type, visit);
        forEachTypeNode(m.returnType, visit);
    }
    std::vector<ir::ExternalType> used;
    for (const auto& ext : ir::defaultExternalTypes())
        if (names.count(ext.name)) used.push_back(ext);
    return used;
}

inline bool isClassTarget(const ir::IrProgram& prog, const std::string& name) {
    const ir::TypeDecl* d = prog.findDecl(name);
    return d && d->kind == ir::DeclKind::Class;
}

template <typename T>
inline std::string joinComma(const std::vector<T>& items,
                             std::string (*fn)(const T&)) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += fn(items[i]);
    }
    return out;
}

// ---------------------------------------------------------------- Java-like

inline std::string javaType(const ir::TypeRef& t, bool returnRoot,
                            bool inTypeArgs) {
    switch (t.kind) {
        case ir::TypeKind::Builtin:
            switch (t.builtin) {
                case ir::Builtin::Top: return "Object";
                case ir::Builtin::String: return "String";
                case ir::Builtin::Int: return inTypeArgs ? "Integer" : "int";
                case ir::Builtin::Unit: return "void";
            }
            return "?";
        case ir::TypeKind::TypeParam:
            return t.name;
        case ir::TypeKind::ClassType: {
            std::string out = t.name;
            if (!t.args.empty()) {
                out += "<";
                for (std::size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out += ", ";
                    out += javaType(t.args[i], false, true);
                }
                out += ">";
            }
            return out;
        }
    }
    (void)returnRoot;
    return "?";
}

inline std::string javaBody(const ir::TypeRef& ret, const std::string& indent) {
    if (ret.kind == ir::TypeKind::Builtin && ret.builtin == ir::Builtin::Unit)
        return " {\n" + indent + "}";
    const char* expr = "null";
    if (ret.kind == ir::TypeKind::Builtin && ret.builtin == ir::Builtin::Int)
        expr = "0";
    return " {\n" + indent + "    return " + std::string(expr) + ";\n" + indent +
           "}";
}

inline std::string javaParams(const ir::MethodDecl& m) {
    std::string out;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        out += javaType(m.params[i].type, false, false) + " " + m.params[i].name;
    }
    return out;
}

// Shared by Java and Groovy; Groovy drops the `public` everywhere else but
// keeps the structure.
inline std::string javaLikeDecl(const ir::IrProgram& prog, const ir::TypeDecl& d,
                                bool groovy) {
    const std::string pub = groovy ? "" : "public ";
    std::string out;
    for (const auto& ext : referencedExternals(d))
        out += "import " + ext.javaImport + ";\n";
    if (!out.empty()) out += "\n";

    out += pub;
    if (d.kind == ir::DeclKind::Interface) {
        out += "interface " + d.name;
    } else {
        if (d.modifier == ir::ClassModifier::Abstract) out += "abstract ";
        if (d.modifier == ir::ClassModifier::Final) out += "final ";
        out += "class " + d.name;
    }
    if (!d.typeParams.empty()) {
        out += "<";
        for (std::size_t i = 0; i < d.typeParams.size(); ++i) {
            if (i) out += ", ";
            out += d.typeParams[i].name;
        }
        out += ">";
    }

    auto superText = [&](const ir::SuperTypeRef& s) {
        std::string st = s.target;
        if (!s.args.empty()) {
            st += "<";
            for (std::size_t i = 0; i < s.args.size(); ++i) {
                if (i) st += ", ";
                st += javaType(s.args[i], false, true);
            }
            st += ">";
        }
        return st;
    };
    std::vector<std::string> extendsList, implementsList;
    for (const auto& s : d.supertypes) {
        if (d.kind == ir::DeclKind::Class && isClassTarget(prog, s.target))
            extendsList.push_back(superText(s));
        else if (d.kind == ir::DeclKind::Interface)
            extendsList.push_back(superText(s));
        else
            implementsList.push_back(superText(s));
    }
    if (!extendsList.empty()) {
        out += " extends ";
        for (std::size_t i = 0; i < extendsList.size(); ++i) {
            if (i) out += ", ";
            out += extendsList[i];
        }
    }
    if (!implementsList.empty()) {
        out += " implements ";
        for (std::size_t i = 0; i < implementsList.size(); ++i) {
            if (i) out += ", ";
            out += implementsList[i];
        }
    }
    out += " {\n";

    for (const auto& m : d.methods) {
        if (!m.overrides.empty()) out += "    @Override\n";
        out += "    " + pub;
        std::string ret = javaType(m.returnType, true, false);
        if (d.kind == ir::DeclKind::Interface) {
            if (m.kind == ir::MethodKind::Abstract) {
                out += ret + " " + m.name + "(" + javaParams(m) + ");\n";
            } else {
                out += "default " + ret + " " + m.name + "(" + javaParams(m) +
                       ")" + javaBody(m.returnType, "    ") + "\n";
            }
        } else {
            if (m.kind == ir::MethodKind::Abstract) {
                out += "abstract " + ret + " " + m.name + "(" + javaParams(m) +
                       ");\n";
            } else {
                if (m.kind == ir::MethodKind::Final) out += "final ";
                out += ret + " " + m.name + "(" + javaParams(m) + ")" +
                       javaBody(m.returnType, "    ") + "\n";
            }
        }
    }
    out += "}\n";
    return out;
}

// ------------------------------------------------------------------ Kotlin

inline std::string kotlinType(const ir::TypeRef& t, bool nullable) {
    switch (t.kind) {
        case ir::TypeKind::Builtin:
            switch (t.builtin) {
                case ir::Builtin::Top: return nullable ? "Any?" : "Any";
                case ir::Builtin::String: return nullable ? "String?" : "String";
                case ir::Builtin::Int: return "Int";
                case ir::Builtin::Unit: return "Unit";
            }
            return "?";
        case ir::TypeKind::TypeParam:
            return t.name;
        case ir::TypeKind::ClassType: {
            std::string out = t.name;
            if (!t.args.empty()) {
                out += "<";
                for (std::size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out += ", ";
                    out += kotlinType(t.args[i], nullable);
                }
                out += ">";
            }
            if (nullable) out += "?";
            return out;
        }
    }
    return "?";
}

inline bool isUnit(const ir::TypeRef& t) {
    return t.kind == ir::TypeKind::Builtin && t.builtin == ir::Builtin::Unit;
}

inline std::string kotlinBody(const ir::TypeRef& ret, bool nullable) {
    if (isUnit(ret)) return " {\n    }";
    switch (ret.kind) {
        case ir::TypeKind::Builtin:
            switch (ret.builtin) {
                case ir::Builtin::Int: return " = 0";
                case ir::Builtin::String: return nullable ? " = null" : " = \"\"";
                case ir::Builtin::Top: return nullable ? " = null" : " = Any()";
                default: return " = null";
            }
        case ir::TypeKind::TypeParam:
            return " = null as " + ret.name;
        case ir::TypeKind::ClassType:
            return nullable ? " = null"
                            : " = null as " + kotlinType(ret, false);
    }
    return " = null";
}

inline std::string kotlinDecl(const ir::IrProgram& prog, const ir::TypeDecl& d,
                              bool nullable) {
    std::string out;
    if (d.kind == ir::DeclKind::Interface) {
        out += "interface " + d.name;
    } else {
        switch (d.modifier) {
            case ir::ClassModifier::Open: out += "open "; break;
            case ir::ClassModifier::Abstract: out += "abstract "; break;
            case ir::ClassModifier::Final: break;
        }
        out += "class " + d.name;
    }
    if (!d.typeParams.empty()) {
        out += "<";
        for (std::size_t i = 0; i < d.typeParams.size(); ++i) {
            if (i) out += ", ";
            out += d.typeParams[i].name;
        }
        out += ">";
    }
    if (!d.supertypes.empty()) {
        out += " : ";
        for (std::size_t i = 0; i < d.supertypes.size(); ++i) {
            if (i) out += ", ";
            const auto& s = d.supertypes[i];
            out += s.target;
            if (!s.args.empty()) {
                out += "<";
                for (std::size_t a = 0; a < s.args.size(); ++a) {
                    if (a) out += ", ";
                    out += kotlinType(s.args[a], nullable);
                }
                out += ">";
            }
            if (d.kind == ir::DeclKind::Class && isClassTarget(prog, s.target))
                out += "()";
        }
    }
    out += " {\n";

    for (const auto& m : d.methods) {
        bool isOverride = !m.overrides.empty();
        out += "    ";
        if (d.kind == ir::DeclKind::Interface) {
            if (isOverride) out += "override ";
        } else {
            switch (m.kind) {
                case ir::MethodKind::Abstract:
                    if (isOverride) out += "abstract override ";
                    else out += "abstract ";
                    break;
                case ir::MethodKind::Final:
                    if (isOverride) out += "final override ";
                    break;
                case ir::MethodKind::Normal:
                    out += isOverride ? "override " : "open ";
                    break;
            }
        }
        out += "fun " + m.name + "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) out += ", ";
            out += m.params[i].name + ": " + kotlinType(m.params[i].type, nullable);
        }
        out += ")";
        if (!isUnit(m.returnType))
            out += ": " + kotlinType(m.returnType, nullable);

        bool bodiless = m.kind == ir::MethodKind::Abstract;
        if (!bodiless) {
            // a unit-returning interface method still needs its default body
            out += kotlinBody(m.returnType, nullable);
        }
        out += "\n";
    }
    out += "}\n";
    return out;
}

// ------------------------------------------------------------------- Scala

inline std::string scalaType(const ir::TypeRef& t) {
    switch (t.kind) {
        case ir::TypeKind::Builtin:
            switch (t.builtin) {
                case ir::Builtin::Top: return "Object";
                case ir::Builtin::String: return "String";
                case ir::Builtin::Int: return "Int";
                case ir::Builtin::Unit: return "Unit";
            }
            return "?";
        case ir::TypeKind::TypeParam:
            return t.name;
        case ir::TypeKind::ClassType: {
            std::string out = t.name;
            if (!t.args.empty()) {
                out += "[";
                for (std::size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out += ", ";
                    out += scalaType(t.args[i]);
                }
                out += "]";
            }
            return out;
        }
    }
    return "?";
}

inline std::string scalaBody(const ir::TypeRef& ret) {
    if (isUnit(ret)) return " = {}";
    switch (ret.kind) {
        case ir::TypeKind::Builtin:
            return ret.builtin == ir::Builtin::Int ? " = 0" : " = null";
        case ir::TypeKind::TypeParam:
            return " = null.asInstanceOf[" + ret.name + "]";
        case ir::TypeKind::ClassType:
            return " = null";
    }
    return " = null";
}

inline std::string scalaDecl(const ir::TypeDecl& d) {
    std::string out;
    for (const auto& ext : referencedExternals(d))
        out += "import " + ext.javaImport + "\n";
    if (!out.empty()) out += "\n";

    if (d.kind == ir::DeclKind::Interface) {
        out += "trait " + d.name;
    } else {
        if (d.modifier == ir::ClassModifier::Abstract) out += "abstract ";
        if (d.modifier == ir::ClassModifier::Final) out += "final ";
        out += "class " + d.name;
    }
    if (!d.typeParams.empty()) {
        out += "[";
        for (std::size_t i = 0; i < d.typeParams.size(); ++i) {
            if (i) out += ", ";
            out += d.typeParams[i].name;
        }
        out += "]";
    }
    for (std::size_t i = 0; i < d.supertypes.size(); ++i) {
        const auto& s = d.supertypes[i];
        out += i == 0 ? " extends " : " with ";
        out += s.target;
        if (!s.args.empty()) {
            out += "[";
            for (std::size_t a = 0; a < s.args.size(); ++a) {
                if (a) out += ", ";
                out += scalaType(s.args[a]);
            }
            out += "]";
        }
    }
    out += " {\n";

    for (const auto& m : d.methods) {
        out += "    ";
        if (m.kind == ir::MethodKind::Final) out += "final ";
        if (!m.overrides.empty()) out += "override ";
        out += "def " + m.name + "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) out += ", ";
            out += m.params[i].name + ": " + scalaType(m.params[i].type);
        }
        out += "): " + scalaType(m.returnType);
        if (m.kind != ir::MethodKind::Abstract) out += scalaBody(m.returnType);
        out += "\n";
    }
    out += "}\n";
    return out;
}

}  // namespace detail

inline SourceBundle renderProgram(const ir::IrProgram& prog,
                                  const RenderOptions& opts = {}) {
    SourceBundle bundle;
    bundle.program = prog;
    for (const auto& d : prog.declarations) {
        SourceFile f;
        f.lang = d.lang;
        f.decl = d.name;
        f.path = "src/" + d.name + "." + fileExtension(d.lang);
        switch (d.lang) {
            case ir::Lang::Java:
                f.content = detail::javaLikeDecl(prog, d, false);
                break;
            case ir::Lang::Groovy:
                f.content = detail::javaLikeDecl(prog, d, true);
                break;
            case ir::Lang::Kotlin:
                f.content = detail::kotlinDecl(prog, d, opts.kotlinNullableRefs);
                break;
            case ir::Lang::Scala:
                f.content = detail::scalaDecl(d);
                break;
        }
        bundle.files.push_back(std::move(f));
    }
    return bundle;
}

inline ir::Json bundleManifest(const SourceBundle& bundle) {
    ir::Json j;
    j["schema"] = "bundle/1";
    j["program"] = ir::toJson(bundle.program);
    ir::Json files = ir::Json::array();
    for (const auto& f : bundle.files)
        files.push_back(ir::Json{{"path", f.path},
                                 {"lang", ir::toString(f.lang)},
                                 {"decl", f.decl}});
    j["files"] = std::move(files);
    return j;
}

inline void writeBundle(const SourceBundle& bundle,
                        const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    for (const auto& f : bundle.files) {
        fs::path p = dir / f.path;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write " + p.string());
        out << f.content;
    }
    fs::create_directories(dir);
    std::ofstream manifest(dir / "bundle.json", std::ios::binary);
    if (!manifest) throw Error("cannot write bundle.json under " + dir.string());
    manifest << bundleManifest(bundle).dump(2) << "\n";
}

}  // namespace xlang::render
