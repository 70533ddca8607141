#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xlang/ir.hpp"
#include "xlang/signature.hpp"

// Program validation.
//
// Full mode checks everything the generator promises: structure, scoping,
// hierarchy shape, override-signature equality and the abstract-method
// closure of concrete classes.
//
// StructuralOnly drops the last two. Mutants are only guaranteed to keep the
// structural invariants - deleting a mandatory override or retyping a method
// breaks override semantics on purpose (that is what makes them interesting
// inputs), so semantic checks are deferred to the compilers under test.

namespace xlang::ir {

enum class ValidationMode { Full, StructuralOnly };

enum class ViolationCode {
    DuplicateDeclName,
    DuplicateTypeParam,
    DuplicateParamName,
    DuplicateSupertype,
    DuplicateMethodSignature,
    UnknownSupertypeTarget,
    SupertypeArityMismatch,
    ClassSupertypeOfInterface,
    MultipleClassSupertypes,
    FinalSupertype,
    CycleInHierarchy,
    UnknownTypeName,
    TypeArityMismatch,
    UnknownTypeParam,
    UnitOutsideReturn,
    AbstractMethodInConcreteClass,
    FinalMethodInInterface,
    UnknownOverrideTarget,
    OverrideSignatureMismatch,
    UnimplementedAbstractSignature,
};

inline const char* toString(ViolationCode c) {
    switch (c) {
        case ViolationCode::DuplicateDeclName: return "DuplicateDeclName";
        case ViolationCode::DuplicateTypeParam: return "DuplicateTypeParam";
        case ViolationCode::DuplicateParamName: return "DuplicateParamName";
        case ViolationCode::DuplicateSupertype: return "DuplicateSupertype";
        case ViolationCode::DuplicateMethodSignature: return "DuplicateMethodSignature";
        case ViolationCode::UnknownSupertypeTarget: return "UnknownSupertypeTarget";
        case ViolationCode::SupertypeArityMismatch: return "SupertypeArityMismatch";
        case ViolationCode::ClassSupertypeOfInterface: return "ClassSupertypeOfInterface";
        case ViolationCode::MultipleClassSupertypes: return "MultipleClassSupertypes";
        case ViolationCode::FinalSupertype: return "FinalSupertype";
        case ViolationCode::CycleInHierarchy: return "CycleInHierarchy";
        case ViolationCode::UnknownTypeName: return "UnknownTypeName";
        case ViolationCode::TypeArityMismatch: return "TypeArityMismatch";
        case ViolationCode::UnknownTypeParam: return "UnknownTypeParam";
        case ViolationCode::UnitOutsideReturn: return "UnitOutsideReturn";
        case ViolationCode::AbstractMethodInConcreteClass:
            return "AbstractMethodInConcreteClass";
        case ViolationCode::FinalMethodInInterface: return "FinalMethodInInterface";
        case ViolationCode::UnknownOverrideTarget: return "UnknownOverrideTarget";
        case ViolationCode::OverrideSignatureMismatch:
            return "OverrideSignatureMismatch";
        case ViolationCode::UnimplementedAbstractSignature:
            return "UnimplementedAbstractSignature";
    }
    return "?";
}

struct Violation {
    ViolationCode code;
    std::string path;  // JSON pointer into the canonical program document
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    bool has(ViolationCode code) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.code == code; });
    }

    std::string toString() const {
        std::ostringstream os;
        for (const auto& v : violations)
            os << ir::toString(v.code) << " at " << v.path << ": " << v.message
               << "\n";
        return os.str();
    }
};

// Generic types the validator and renderers know about without an in-program
// declaration. Rendering adds the matching import.
struct ExternalType {
    std::string name;
    std::size_t arity;
    std::string javaImport;
};

inline const std::vector<ExternalType>& defaultExternalTypes() {
    static const std::vector<ExternalType> kExternals = {
        {"ArrayList", 1, "java.util.ArrayList"},
    };
    return kExternals;
}

namespace detail {

struct ValidationContext {
    const IrProgram& program;
    const std::vector<ExternalType>& externals;
    ValidationReport& report;

    void add(ViolationCode code, std::string path, std::string message) {
        report.violations.push_back({code, std::move(path), std::move(message)});
    }

    const ExternalType* findExternal(const std::string& name) const {
        for (const auto& e : externals)
            if (e.name == name) return &e;
        return nullptr;
    }
};

inline void checkTypeRef(ValidationContext& ctx, const TypeRef& type,
                         const TypeDecl& decl, const std::string& path,
                         bool returnRoot) {
    switch (type.kind) {
        case TypeKind::Builtin:
            if (type.builtin == Builtin::Unit && !returnRoot)
                ctx.add(ViolationCode::UnitOutsideReturn, path,
                        "Unit is only valid as a method return type");
            break;
        case TypeKind::TypeParam: {
            bool inScope = std::any_of(
                decl.typeParams.begin(), decl.typeParams.end(),
                [&](const TypeParamDecl& tp) { return tp.name == type.name; });
            if (!inScope)
                ctx.add(ViolationCode::UnknownTypeParam, path,
                        "type parameter " + type.name + " is not in scope in " +
                            decl.name);
            break;
        }
        case TypeKind::ClassType: {
            std::size_t arity = 0;
            bool known = false;
            if (const TypeDecl* d = ctx.program.findDecl(type.name)) {
                arity = d->typeParams.size();
                known = true;
            } else if (const ExternalType* e = ctx.findExternal(type.name)) {
                arity = e->arity;
                known = true;
            }
            if (!known) {
                ctx.add(ViolationCode::UnknownTypeName, path,
                        "unknown type " + type.name);
                return;
            }
            if (type.args.size() != arity)
                ctx.add(ViolationCode::TypeArityMismatch, path,
                        type.name + " expects " + std::to_string(arity) +
                            " type argument(s), got " +
                            std::to_string(type.args.size()));
            for (std::size_t i = 0; i < type.args.size(); ++i)
                checkTypeRef(ctx, type.args[i], decl,
                             path + "/args/" + std::to_string(i), false);
            break;
        }
    }
}

inline void checkDeclStructure(ValidationContext& ctx, const TypeDecl& decl,
                               std::size_t declIndex) {
    const std::string base = "/declarations/" + std::to_string(declIndex);

    std::set<std::string> tpNames;
    for (std::size_t i = 0; i < decl.typeParams.size(); ++i)
        if (!tpNames.insert(decl.typeParams[i].name).second)
            ctx.add(ViolationCode::DuplicateTypeParam,
                    base + "/typeParams/" + std::to_string(i),
                    "duplicate type parameter " + decl.typeParams[i].name);

    std::set<std::string> superTargets;
    std::size_t classSupers = 0;
    for (std::size_t i = 0; i < decl.supertypes.size(); ++i) {
        const SuperTypeRef& super = decl.supertypes[i];
        const std::string path = base + "/supertypes/" + std::to_string(i);
        if (!superTargets.insert(super.target).second)
            ctx.add(ViolationCode::DuplicateSupertype, path,
                    "duplicate supertype " + super.target);
        const TypeDecl* target = ctx.program.findDecl(super.target);
        if (!target) {
            ctx.add(ViolationCode::UnknownSupertypeTarget, path,
                    "supertype " + super.target + " is not declared");
            continue;
        }
        if (target->typeParams.size() != super.args.size())
            ctx.add(ViolationCode::SupertypeArityMismatch, path,
                    super.target + " expects " +
                        std::to_string(target->typeParams.size()) +
                        " type argument(s), got " +
                        std::to_string(super.args.size()));
        for (std::size_t a = 0; a < super.args.size(); ++a)
            checkTypeRef(ctx, super.args[a], decl,
                         path + "/args/" + std::to_string(a), false);
        if (target->kind == DeclKind::Class) {
            ++classSupers;
            if (decl.kind == DeclKind::Interface)
                ctx.add(ViolationCode::ClassSupertypeOfInterface, path,
                        "interface " + decl.name + " extends class " +
                            super.target);
            if (target->modifier == ClassModifier::Final)
                ctx.add(ViolationCode::FinalSupertype, path,
                        super.target + " is final");
        }
    }
    if (classSupers > 1)
        ctx.add(ViolationCode::MultipleClassSupertypes, base + "/supertypes",
                decl.name + " has " + std::to_string(classSupers) +
                    " class supertypes");

    std::set<std::string> methodKeys;
    for (std::size_t i = 0; i < decl.methods.size(); ++i) {
        const MethodDecl& m = decl.methods[i];
        const std::string path = base + "/methods/" + std::to_string(i);
        if (!methodKeys.insert(signatureOf(m).key()).second)
            ctx.add(ViolationCode::DuplicateMethodSignature, path,
                    "duplicate method signature " + signatureOf(m).key());
        if (m.kind == MethodKind::Abstract && decl.kind == DeclKind::Class &&
            decl.modifier != ClassModifier::Abstract)
            ctx.add(ViolationCode::AbstractMethodInConcreteClass, path,
                    m.name + " is abstract but " + decl.name + " is not");
        if (m.kind == MethodKind::Final && decl.kind == DeclKind::Interface)
            ctx.add(ViolationCode::FinalMethodInInterface, path,
                    m.name + " cannot be final in an interface");
        std::set<std::string> paramNames;
        for (std::size_t p = 0; p < m.params.size(); ++p) {
            if (!paramNames.insert(m.params[p].name).second)
                ctx.add(ViolationCode::DuplicateParamName,
                        path + "/params/" + std::to_string(p),
                        "duplicate parameter " + m.params[p].name);
            checkTypeRef(ctx, m.params[p].type, decl,
                         path + "/params/" + std::to_string(p) + "/type", false);
        }
        checkTypeRef(ctx, m.returnType, decl, path + "/returnType", true);
    }
}

// One violation per strongly connected component of the supertype graph that
// contains a cycle, naming all participating declarations.
inline bool checkCycles(ValidationContext& ctx) {
    const auto& decls = ctx.program.declarations;
    std::map<std::string, std::size_t> indexOf;
    for (std::size_t i = 0; i < decls.size(); ++i)
        indexOf.emplace(decls[i].name, i);

    std::vector<int> comp(decls.size(), -1), low(decls.size(), 0),
        num(decls.size(), -1);
    std::vector<std::size_t> stack;
    std::vector<bool> onStack(decls.size(), false);
    int counter = 0, compCount = 0;
    bool cyclic = false;

    // Iterative Tarjan; frame = (node, next edge index).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    auto edgeTarget = [&](std::size_t n, std::size_t e) -> int {
        const auto& supers = decls[n].supertypes;
        if (e >= supers.size()) return -1;
        auto it = indexOf.find(supers[e].target);
        return it == indexOf.end() ? -2 : static_cast<int>(it->second);
    };

    std::vector<std::vector<std::size_t>> components;
    for (std::size_t root = 0; root < decls.size(); ++root) {
        if (num[root] != -1) continue;
        frames.push_back({root, 0});
        num[root] = low[root] = counter++;
        stack.push_back(root);
        onStack[root] = true;
        while (!frames.empty()) {
            auto& [n, e] = frames.back();
            if (e < decls[n].supertypes.size()) {
                int t = edgeTarget(n, e++);
                if (t == -2) continue;  // unresolved target, reported elsewhere
                std::size_t ti = static_cast<std::size_t>(t);
                if (num[ti] == -1) {
                    num[ti] = low[ti] = counter++;
                    stack.push_back(ti);
                    onStack[ti] = true;
                    frames.push_back({ti, 0});
                } else if (onStack[ti]) {
                    low[n] = std::min(low[n], num[ti]);
                }
            } else {
                if (low[n] == num[n]) {
                    std::vector<std::size_t> component;
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        onStack[w] = false;
                        comp[w] = compCount;
                        component.push_back(w);
                        if (w == n) break;
                    }
                    ++compCount;
                    components.push_back(std::move(component));
                }
                std::size_t finished = n;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().first] =
                        std::min(low[frames.back().first], low[finished]);
            }
        }
    }

    for (const auto& component : components) {
        bool isCycle = component.size() > 1;
        if (component.size() == 1) {
            // self-loop?
            const TypeDecl& d = decls[component[0]];
            for (const auto& s : d.supertypes)
                if (s.target == d.name) isCycle = true;
        }
        if (!isCycle) continue;
        cyclic = true;
        std::vector<std::string> names;
        for (std::size_t i : component) names.push_back(decls[i].name);
        std::sort(names.begin(), names.end());
        std::string joined;
        for (const auto& n : names) {
            if (!joined.empty()) joined += ", ";
            joined += n;
        }
        ctx.add(ViolationCode::CycleInHierarchy, "/declarations",
                "supertype cycle involving {" + joined + "}");
    }
    return cyclic;
}

inline void checkOverridesAndClosure(ValidationContext& ctx, const TypeDecl& decl,
                                     std::size_t declIndex, ValidationMode mode) {
    const std::string base = "/declarations/" + std::to_string(declIndex);
    SignatureMap map = collectMethodSignatureMap(ctx.program, decl);
    std::set<std::string> ancestors = allAncestors(ctx.program, decl);

    for (std::size_t i = 0; i < decl.methods.size(); ++i) {
        const MethodDecl& m = decl.methods[i];
        const std::string path = base + "/methods/" + std::to_string(i);
        for (const auto& ref : m.overrides) {
            if (ref.method != m.name) {
                ctx.add(ViolationCode::UnknownOverrideTarget, path,
                        m.name + " claims to override differently named " +
                            ref.decl + "::" + ref.method);
                continue;
            }
            const TypeDecl* target = ctx.program.findDecl(ref.decl);
            if (!target || !ancestors.count(ref.decl)) {
                ctx.add(ViolationCode::UnknownOverrideTarget, path,
                        ref.decl + " is not an ancestor of " + decl.name);
                continue;
            }
            bool hasMethod = std::any_of(
                target->methods.begin(), target->methods.end(),
                [&](const MethodDecl& tm) { return tm.name == ref.method; });
            if (!hasMethod) {
                ctx.add(ViolationCode::UnknownOverrideTarget, path,
                        ref.decl + " has no method " + ref.method);
                continue;
            }
            if (mode == ValidationMode::Full) {
                auto entry = map.find(signatureOf(m).key());
                bool matches = false;
                if (entry != map.end()) {
                    const SignatureEntry& e = entry->second;
                    if (e.superClassMethod &&
                        e.superClassMethod->ownerDecl == ref.decl &&
                        e.superClassMethod->methodName == ref.method)
                        matches = true;
                    for (const auto& f : e.interfaceMethods)
                        if (f.ownerDecl == ref.decl && f.methodName == ref.method)
                            matches = true;
                }
                if (!matches)
                    ctx.add(ViolationCode::OverrideSignatureMismatch, path,
                            m.name + " does not match the inherited signature of " +
                                ref.decl + "::" + ref.method);
            }
        }
    }

    if (mode == ValidationMode::Full && decl.kind == DeclKind::Class &&
        decl.modifier != ClassModifier::Abstract) {
        std::map<std::string, const MethodDecl*> own;
        for (const auto& m : decl.methods) own[signatureOf(m).key()] = &m;
        for (const auto& [key, entry] : map) {
            auto it = own.find(key);
            if (it != own.end() && it->second->kind != MethodKind::Abstract)
                continue;
            bool concrete =
                entry.superClassMethod && entry.superClassMethod->isConcrete();
            for (const auto& f : entry.interfaceMethods)
                concrete = concrete || f.isConcrete();
            if (!concrete)
                ctx.add(ViolationCode::UnimplementedAbstractSignature, base,
                        decl.name + " leaves " + entry.signature.key() +
                            " unimplemented");
        }
    }
}

}  // namespace detail

inline ValidationReport validate(
    const IrProgram& program, ValidationMode mode = ValidationMode::Full,
    const std::vector<ExternalType>& externals = defaultExternalTypes()) {
    ValidationReport report;
    detail::ValidationContext ctx{program, externals, report};

    std::set<std::string> names;
    for (std::size_t i = 0; i < program.declarations.size(); ++i)
        if (!names.insert(program.declarations[i].name).second)
            ctx.add(ViolationCode::DuplicateDeclName,
                    "/declarations/" + std::to_string(i),
                    "duplicate declaration " + program.declarations[i].name);

    for (std::size_t i = 0; i < program.declarations.size(); ++i)
        detail::checkDeclStructure(ctx, program.declarations[i], i);

    bool cyclic = detail::checkCycles(ctx);

    // Override/closure checks need a resolvable, acyclic hierarchy.
    bool resolvable = !cyclic &&
                      !report.has(ViolationCode::UnknownSupertypeTarget) &&
                      !report.has(ViolationCode::SupertypeArityMismatch) &&
                      !report.has(ViolationCode::UnknownTypeParam) &&
                      !report.has(ViolationCode::DuplicateDeclName);
    if (resolvable)
        for (std::size_t i = 0; i < program.declarations.size(); ++i)
            detail::checkOverridesAndClosure(ctx, program.declarations[i], i, mode);

    return report;
}

}  // namespace xlang::ir
