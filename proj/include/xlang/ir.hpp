#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Language-neutral intermediate representation for inheritance/generics rich
// JVM programs. Every construct here is expressible in Java, Kotlin, Groovy
// and Scala simultaneously; features that do not translate across all four
// (wildcards, raw types, bounded type parameters, properties, ...) are
// deliberately unrepresentable.

namespace xlang::ir {

using Json = nlohmann::ordered_json;

enum class Lang { Java, Kotlin, Groovy, Scala };
enum class DeclKind { Class, Interface };
enum class ClassModifier { Open, Final, Abstract };
enum class MethodKind { Abstract, Final, Normal };

enum class TypeKind { ClassType, TypeParam, Builtin };
enum class Builtin { Top, String, Int, Unit };

// A reference to a type: a declared (or known external) class/interface with
// type arguments, a type parameter in scope, or one of four builtins.
struct TypeRef {
    TypeKind kind{TypeKind::Builtin};
    std::string name;            // ClassType / TypeParam only
    Builtin builtin{Builtin::Top};
    std::vector<TypeRef> args;   // ClassType only

    static TypeRef classType(std::string n, std::vector<TypeRef> a = {}) {
        TypeRef t;
        t.kind = TypeKind::ClassType;
        t.name = std::move(n);
        t.args = std::move(a);
        return t;
    }
    static TypeRef typeParam(std::string n) {
        TypeRef t;
        t.kind = TypeKind::TypeParam;
        t.name = std::move(n);
        return t;
    }
    static TypeRef builtinType(Builtin b) {
        TypeRef t;
        t.kind = TypeKind::Builtin;
        t.builtin = b;
        return t;
    }

    bool operator==(const TypeRef&) const = default;

    // Stable structural key, usable for signature maps and diffing.
    std::string key() const {
        switch (kind) {
            case TypeKind::TypeParam:
                return "p:" + name;
            case TypeKind::Builtin:
                switch (builtin) {
                    case Builtin::Top: return "b:top";
                    case Builtin::String: return "b:string";
                    case Builtin::Int: return "b:int";
                    case Builtin::Unit: return "b:unit";
                }
                return "b:?";
            case TypeKind::ClassType: {
                std::string s = "c:" + name;
                if (!args.empty()) {
                    s += '<';
                    for (std::size_t i = 0; i < args.size(); ++i) {
                        if (i) s += ',';
                        s += args[i].key();
                    }
                    s += '>';
                }
                return s;
            }
        }
        return "?";
    }
};

inline TypeRef topType() { return TypeRef::builtinType(Builtin::Top); }
inline TypeRef stringType() { return TypeRef::builtinType(Builtin::String); }
inline TypeRef intType() { return TypeRef::builtinType(Builtin::Int); }
inline TypeRef unitType() { return TypeRef::builtinType(Builtin::Unit); }

// (declaration, method) pair naming an overridden inherited method.
struct OverrideRef {
    std::string decl;
    std::string method;
    bool operator==(const OverrideRef&) const = default;
};

struct ParamDecl {
    std::string name;
    TypeRef type;
    bool operator==(const ParamDecl&) const = default;
};

struct MethodDecl {
    std::string name;
    MethodKind kind{MethodKind::Normal};
    std::vector<ParamDecl> params;
    TypeRef returnType{TypeRef::builtinType(Builtin::Unit)};
    std::vector<OverrideRef> overrides;
    bool operator==(const MethodDecl&) const = default;
};

struct TypeParamDecl {
    std::string name;  // unbounded by construction
    bool operator==(const TypeParamDecl&) const = default;
};

struct SuperTypeRef {
    std::string target;
    std::vector<TypeRef> args;
    bool operator==(const SuperTypeRef&) const = default;
};

struct TypeDecl {
    std::string name;
    DeclKind kind{DeclKind::Class};
    ClassModifier modifier{ClassModifier::Open};  // classes only
    Lang lang{Lang::Java};
    std::vector<TypeParamDecl> typeParams;
    std::vector<SuperTypeRef> supertypes;
    std::vector<MethodDecl> methods;
    bool operator==(const TypeDecl&) const = default;
};

// One applied mutation: enough to replay it onto the pre-image and to invert
// it from the post-image. Edits address subtrees of the canonical JSON form.
struct MutationEdit {
    std::string path;  // JSON pointer into the canonical program document
    Json before;       // subtree before the edit
    Json after;        // subtree after the edit
    bool operator==(const MutationEdit&) const = default;
};

struct MutationRecord {
    std::string mutator;
    std::uint64_t seed{0};  // stream the mutator consumed
    std::vector<MutationEdit> edits;
    bool operator==(const MutationRecord&) const = default;
};

struct IrProgram {
    std::uint64_t seed{0};
    std::vector<TypeDecl> declarations;
    std::vector<MutationRecord> provenance;
    bool operator==(const IrProgram&) const = default;

    const TypeDecl* findDecl(const std::string& name) const {
        for (const auto& d : declarations)
            if (d.name == name) return &d;
        return nullptr;
    }
    TypeDecl* findDecl(const std::string& name) {
        for (auto& d : declarations)
            if (d.name == name) return &d;
        return nullptr;
    }
};

inline const char* toString(Lang l) {
    switch (l) {
        case Lang::Java: return "java";
        case Lang::Kotlin: return "kotlin";
        case Lang::Groovy: return "groovy";
        case Lang::Scala: return "scala";
    }
    return "?";
}

inline const char* toString(DeclKind k) {
    return k == DeclKind::Class ? "class" : "interface";
}

inline const char* toString(ClassModifier m) {
    switch (m) {
        case ClassModifier::Open: return "open";
        case ClassModifier::Final: return "final";
        case ClassModifier::Abstract: return "abstract";
    }
    return "?";
}

inline const char* toString(MethodKind k) {
    switch (k) {
        case MethodKind::Abstract: return "abstract";
        case MethodKind::Final: return "final";
        case MethodKind::Normal: return "normal";
    }
    return "?";
}

}  // namespace xlang::ir
