#pragma once

#include <string>

#include "xlang/errors.hpp"
#include "xlang/ir.hpp"

// Canonical JSON interchange form. Key order, indentation and enum spellings
// are frozen so that equal programs always serialize to identical bytes;
// corpus artifacts, mutation diffs and determinism checks all rely on that.

namespace xlang::ir {

inline constexpr const char* kProgramSchema = "irprog/1";

namespace detail {

inline Lang langFromString(const std::string& s) {
    if (s == "java") return Lang::Java;
    if (s == "kotlin") return Lang::Kotlin;
    if (s == "groovy") return Lang::Groovy;
    if (s == "scala") return Lang::Scala;
    throw ParseError("unknown language tag: " + s);
}

inline ClassModifier modifierFromString(const std::string& s) {
    if (s == "open") return ClassModifier::Open;
    if (s == "final") return ClassModifier::Final;
    if (s == "abstract") return ClassModifier::Abstract;
    throw ParseError("unknown class modifier: " + s);
}

inline MethodKind methodKindFromString(const std::string& s) {
    if (s == "abstract") return MethodKind::Abstract;
    if (s == "final") return MethodKind::Final;
    if (s == "normal") return MethodKind::Normal;
    throw ParseError("unknown method kind: " + s);
}

inline Builtin builtinFromString(const std::string& s) {
    if (s == "top") return Builtin::Top;
    if (s == "string") return Builtin::String;
    if (s == "int") return Builtin::Int;
    if (s == "unit") return Builtin::Unit;
    throw ParseError("unknown builtin type: " + s);
}

inline const char* builtinToString(Builtin b) {
    switch (b) {
        case Builtin::Top: return "top";
        case Builtin::String: return "string";
        case Builtin::Int: return "int";
        case Builtin::Unit: return "unit";
    }
    return "?";
}

}  // namespace detail

inline Json toJson(const TypeRef& t) {
    Json j;
    switch (t.kind) {
        case TypeKind::ClassType: {
            j["kind"] = "class";
            j["name"] = t.name;
            Json args = Json::array();
            for (const auto& a : t.args) args.push_back(toJson(a));
            j["args"] = std::move(args);
            break;
        }
        case TypeKind::TypeParam:
            j["kind"] = "param";
            j["name"] = t.name;
            break;
        case TypeKind::Builtin:
            j["kind"] = "builtin";
            j["name"] = detail::builtinToString(t.builtin);
            break;
    }
    return j;
}

inline TypeRef typeRefFromJson(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("type ref must be an object with a kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "class") {
        std::vector<TypeRef> args;
        if (j.contains("args"))
            for (const auto& a : j.at("args")) args.push_back(typeRefFromJson(a));
        return TypeRef::classType(j.at("name").get<std::string>(), std::move(args));
    }
    if (kind == "param") return TypeRef::typeParam(j.at("name").get<std::string>());
    if (kind == "builtin")
        return TypeRef::builtinType(
            detail::builtinFromString(j.at("name").get<std::string>()));
    throw ParseError("unknown type kind: " + kind);
}

inline Json toJson(const MethodDecl& m) {
    Json j;
    j["name"] = m.name;
    j["kind"] = toString(m.kind);
    Json params = Json::array();
    for (const auto& p : m.params)
        params.push_back(Json{{"name", p.name}, {"type", toJson(p.type)}});
    j["params"] = std::move(params);
    j["returnType"] = toJson(m.returnType);
    Json overrides = Json::array();
    for (const auto& o : m.overrides)
        overrides.push_back(Json{{"decl", o.decl}, {"method", o.method}});
    j["overrides"] = std::move(overrides);
    return j;
}

inline Json toJson(const TypeDecl& d) {
    Json j;
    j["name"] = d.name;
    j["kind"] = toString(d.kind);
    if (d.kind == DeclKind::Class) j["modifier"] = toString(d.modifier);
    j["lang"] = toString(d.lang);
    Json tps = Json::array();
    for (const auto& tp : d.typeParams) tps.push_back(tp.name);
    j["typeParams"] = std::move(tps);
    Json supers = Json::array();
    for (const auto& s : d.supertypes) {
        Json args = Json::array();
        for (const auto& a : s.args) args.push_back(toJson(a));
        supers.push_back(Json{{"target", s.target}, {"args", std::move(args)}});
    }
    j["supertypes"] = std::move(supers);
    Json methods = Json::array();
    for (const auto& m : d.methods) methods.push_back(toJson(m));
    j["methods"] = std::move(methods);
    return j;
}

inline Json toJson(const MutationRecord& r) {
    Json j;
    j["mutator"] = r.mutator;
    j["seed"] = r.seed;
    Json edits = Json::array();
    for (const auto& e : r.edits)
        edits.push_back(
            Json{{"path", e.path}, {"before", e.before}, {"after", e.after}});
    j["edits"] = std::move(edits);
    return j;
}

inline Json toJson(const IrProgram& p) {
    Json j;
    j["schema"] = kProgramSchema;
    j["seed"] = p.seed;
    Json decls = Json::array();
    for (const auto& d : p.declarations) decls.push_back(toJson(d));
    j["declarations"] = std::move(decls);
    Json prov = Json::array();
    for (const auto& r : p.provenance) prov.push_back(toJson(r));
    j["provenance"] = std::move(prov);
    return j;
}

inline MethodDecl methodFromJson(const Json& j) {
    MethodDecl m;
    m.name = j.at("name").get<std::string>();
    m.kind = detail::methodKindFromString(j.at("kind").get<std::string>());
    if (j.contains("params"))
        for (const auto& pj : j.at("params")) {
            ParamDecl p;
            p.name = pj.at("name").get<std::string>();
            p.type = typeRefFromJson(pj.at("type"));
            m.params.push_back(std::move(p));
        }
    m.returnType = j.contains("returnType") ? typeRefFromJson(j.at("returnType"))
                                            : unitType();
    if (j.contains("overrides"))
        for (const auto& oj : j.at("overrides"))
            m.overrides.push_back({oj.at("decl").get<std::string>(),
                                   oj.at("method").get<std::string>()});
    return m;
}

inline TypeDecl declFromJson(const Json& j) {
    TypeDecl d;
    d.name = j.at("name").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "class") d.kind = DeclKind::Class;
    else if (kind == "interface") d.kind = DeclKind::Interface;
    else throw ParseError("unknown decl kind: " + kind);
    if (d.kind == DeclKind::Class)
        d.modifier = j.contains("modifier")
                         ? detail::modifierFromString(j.at("modifier").get<std::string>())
                         : ClassModifier::Open;
    d.lang = detail::langFromString(j.at("lang").get<std::string>());
    if (j.contains("typeParams"))
        for (const auto& tj : j.at("typeParams"))
            d.typeParams.push_back({tj.get<std::string>()});
    if (j.contains("supertypes"))
        for (const auto& sj : j.at("supertypes")) {
            SuperTypeRef s;
            s.target = sj.at("target").get<std::string>();
            if (sj.contains("args"))
                for (const auto& aj : sj.at("args"))
                    s.args.push_back(typeRefFromJson(aj));
            d.supertypes.push_back(std::move(s));
        }
    if (j.contains("methods"))
        for (const auto& mj : j.at("methods"))
            d.methods.push_back(methodFromJson(mj));
    return d;
}

inline MutationRecord mutationRecordFromJson(const Json& j) {
    MutationRecord r;
    r.mutator = j.at("mutator").get<std::string>();
    r.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("edits"))
        for (const auto& ej : j.at("edits"))
            r.edits.push_back(
                {ej.at("path").get<std::string>(), ej.at("before"), ej.at("after")});
    return r;
}

inline IrProgram programFromJson(const Json& j) {
    if (!j.is_object()) throw ParseError("program document must be a JSON object");
    if (j.value("schema", std::string{}) != kProgramSchema)
        throw ParseError("unsupported program schema");
    IrProgram p;
    p.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("declarations"))
        for (const auto& dj : j.at("declarations"))
            p.declarations.push_back(declFromJson(dj));
    if (j.contains("provenance"))
        for (const auto& rj : j.at("provenance"))
            p.provenance.push_back(mutationRecordFromJson(rj));
    return p;
}

// Frozen textual form: 2-space indent plus trailing newline.
inline std::string canonicalText(const Json& j) { return j.dump(2) + "\n"; }
inline std::string canonicalText(const IrProgram& p) { return canonicalText(toJson(p)); }

inline IrProgram programFromText(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad program JSON: ") + e.what());
    }
    try {
        return programFromJson(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad program document: ") + e.what());
    }
}

}  // namespace xlang::ir
