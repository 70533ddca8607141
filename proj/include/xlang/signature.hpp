#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir.hpp"

// Inherited-method resolution. For a declaration D, the signature map answers
// "which methods flow into D from its supertypes, per erased-arity signature,
// and through which kind of edge". Overriding decisions, validity checks and
// the override-rules table all start from this map.
//
// Flow model:
//  * a CLASS supertype contributes at most ONE method per signature (its own
//    declaration if it has one, otherwise the method the class itself
//    resolved that signature to);
//  * an INTERFACE supertype contributes every unresolved declaration that
//    reaches it, one entry per inheritance path - no identity de-duplication,
//    so a diamond yields two entries for the same root method;
//  * a declaration's own methods shadow inherited ones in the views exposed
//    to its subtypes, but the map reported for D lists only what D inherits.

namespace xlang::ir {

using TypeBinding = std::map<std::string, TypeRef>;

inline TypeRef substituteTypeParams(const TypeRef& t, const TypeBinding& binding) {
    switch (t.kind) {
        case TypeKind::Builtin:
            return t;
        case TypeKind::TypeParam: {
            auto it = binding.find(t.name);
            if (it == binding.end()) throw UnboundTypeParamError(t.name);
            return it->second;
        }
        case TypeKind::ClassType: {
            TypeRef out = TypeRef::classType(t.name);
            out.args.reserve(t.args.size());
            for (const auto& a : t.args)
                out.args.push_back(substituteTypeParams(a, binding));
            return out;
        }
    }
    return t;
}

// Name plus substituted parameter types. Return types are deliberately not
// part of the signature: JVM override resolution keys on name and arity.
struct MethodSignature {
    std::string name;
    std::vector<TypeRef> paramTypes;

    bool operator==(const MethodSignature&) const = default;

    std::string key() const {
        std::string s = name + '(';
        for (std::size_t i = 0; i < paramTypes.size(); ++i) {
            if (i) s += ',';
            s += paramTypes[i].key();
        }
        return s + ')';
    }
};

inline MethodSignature signatureOf(const MethodDecl& m) {
    MethodSignature s;
    s.name = m.name;
    for (const auto& p : m.params) s.paramTypes.push_back(p.type);
    return s;
}

// One inherited method as seen from the inheriting declaration: owner, kind
// and types already substituted into the inheritor's frame of reference.
struct FlowMethod {
    std::string ownerDecl;
    std::string methodName;
    MethodKind kind{MethodKind::Normal};
    std::vector<TypeRef> paramTypes;
    TypeRef returnType{TypeRef::builtinType(Builtin::Unit)};

    bool isConcrete() const { return kind != MethodKind::Abstract; }
};

struct SignatureEntry {
    MethodSignature signature;
    std::optional<FlowMethod> superClassMethod;
    std::vector<FlowMethod> interfaceMethods;
};

// Keyed by MethodSignature::key(); std::map keeps iteration deterministic.
using SignatureMap = std::map<std::string, SignatureEntry>;

namespace detail {

struct ExposedEntry {
    MethodSignature signature;
    FlowMethod classRep;               // what a class-supertype edge carries
    std::vector<FlowMethod> ifaceFlows;  // what an interface edge carries
};
using ExposedView = std::map<std::string, ExposedEntry>;

inline FlowMethod substituteFlow(const FlowMethod& f, const TypeBinding& b) {
    FlowMethod out = f;
    for (auto& t : out.paramTypes) t = substituteTypeParams(t, b);
    out.returnType = substituteTypeParams(out.returnType, b);
    return out;
}

inline const FlowMethod& pickClassRep(const SignatureEntry& e) {
    if (e.superClassMethod) return *e.superClassMethod;
    for (const auto& f : e.interfaceMethods)
        if (f.isConcrete()) return f;
    return e.interfaceMethods.front();
}

class SignatureResolver {
public:
    explicit SignatureResolver(const IrProgram& program) : program_(program) {}

    SignatureMap inheritedMap(const TypeDecl& decl) {
        SignatureMap out;
        for (const auto& super : decl.supertypes) {
            const TypeDecl* target = program_.findDecl(super.target);
            if (!target) throw UnresolvedSupertypeError(super.target);
            if (target->typeParams.size() != super.args.size())
                throw Error("supertype arity mismatch at " + decl.name + " : " +
                            super.target);
            TypeBinding binding;
            for (std::size_t i = 0; i < super.args.size(); ++i)
                binding[target->typeParams[i].name] = super.args[i];

            for (const auto& [rawKey, exposed] : view(super.target)) {
                (void)rawKey;
                MethodSignature sig;
                sig.name = exposed.signature.name;
                for (const auto& t : exposed.signature.paramTypes)
                    sig.paramTypes.push_back(substituteTypeParams(t, binding));
                SignatureEntry& entry = out[sig.key()];
                entry.signature = sig;
                if (target->kind == DeclKind::Class) {
                    if (!entry.superClassMethod)
                        entry.superClassMethod =
                            substituteFlow(exposed.classRep, binding);
                } else {
                    for (const auto& f : exposed.ifaceFlows)
                        entry.interfaceMethods.push_back(substituteFlow(f, binding));
                }
            }
        }
        return out;
    }

private:
    const ExposedView& view(const std::string& declName) {
        auto memoIt = memo_.find(declName);
        if (memoIt != memo_.end()) return memoIt->second;
        if (visiting_.count(declName))
            throw Error("supertype cycle through " + declName);
        visiting_.insert(declName);

        const TypeDecl* decl = program_.findDecl(declName);
        if (!decl) throw UnresolvedSupertypeError(declName);

        ExposedView v;
        for (auto& [key, entry] : inheritedMap(*decl)) {
            ExposedEntry e;
            e.signature = entry.signature;
            e.classRep = pickClassRep(entry);
            e.ifaceFlows = entry.interfaceMethods;
            if (entry.interfaceMethods.empty() && entry.superClassMethod)
                e.ifaceFlows = {*entry.superClassMethod};
            v.emplace(key, std::move(e));
        }
        for (const auto& m : decl->methods) {
            MethodSignature sig = signatureOf(m);
            FlowMethod f;
            f.ownerDecl = decl->name;
            f.methodName = m.name;
            f.kind = m.kind;
            f.paramTypes = sig.paramTypes;
            f.returnType = m.returnType;
            ExposedEntry e;
            e.signature = sig;
            e.classRep = f;
            e.ifaceFlows = {f};
            v[sig.key()] = std::move(e);  // own declaration shadows inherited
        }

        visiting_.erase(declName);
        return memo_.emplace(declName, std::move(v)).first->second;
    }

    const IrProgram& program_;
    std::map<std::string, ExposedView> memo_;
    std::set<std::string> visiting_;
};

}  // namespace detail

// Methods declared by D itself are not listed; they shadow inherited entries
// only in the views D exposes to its own subtypes.
inline SignatureMap collectMethodSignatureMap(const IrProgram& program,
                                              const TypeDecl& decl) {
    detail::SignatureResolver resolver(program);
    return resolver.inheritedMap(decl);
}

inline SignatureMap collectMethodSignatureMap(const IrProgram& program,
                                              const std::string& declName) {
    const TypeDecl* decl = program.findDecl(declName);
    if (!decl) throw UnresolvedSupertypeError(declName);
    return collectMethodSignatureMap(program, *decl);
}

// Generic instantiation of every transitive ancestor, expressed in the
// declaration's own type-parameter frame. `conflict` is set when two paths
// reach one ancestor with different type arguments.
struct InstantiationMap {
    std::map<std::string, std::vector<TypeRef>> args;
    bool conflict{false};
    std::string conflictAncestor;
};

inline void collectAncestorInstantiationsInto(const IrProgram& program,
                                              const TypeDecl& decl,
                                              InstantiationMap& out,
                                              std::set<std::string>& onPath) {
    if (onPath.count(decl.name)) throw Error("supertype cycle through " + decl.name);
    onPath.insert(decl.name);
    for (const auto& super : decl.supertypes) {
        const TypeDecl* target = program.findDecl(super.target);
        if (!target) throw UnresolvedSupertypeError(super.target);
        auto it = out.args.find(super.target);
        if (it != out.args.end()) {
            if (it->second != super.args && !out.conflict) {
                out.conflict = true;
                out.conflictAncestor = super.target;
            }
            continue;  // already expanded through an identical instantiation
        }
        out.args[super.target] = super.args;

        if (target->typeParams.size() != super.args.size())
            throw Error("supertype arity mismatch at " + decl.name + " : " +
                        super.target);
        TypeBinding binding;
        for (std::size_t i = 0; i < super.args.size(); ++i)
            binding[target->typeParams[i].name] = super.args[i];

        // Rewrite the target's own ancestor instantiations into our frame.
        InstantiationMap deeper;
        collectAncestorInstantiationsInto(program, *target, deeper, onPath);
        if (deeper.conflict && !out.conflict) {
            out.conflict = true;
            out.conflictAncestor = deeper.conflictAncestor;
        }
        for (const auto& [ancestor, ancestorArgs] : deeper.args) {
            std::vector<TypeRef> substituted;
            substituted.reserve(ancestorArgs.size());
            for (const auto& a : ancestorArgs)
                substituted.push_back(substituteTypeParams(a, binding));
            auto found = out.args.find(ancestor);
            if (found == out.args.end()) {
                out.args[ancestor] = std::move(substituted);
            } else if (found->second != substituted && !out.conflict) {
                out.conflict = true;
                out.conflictAncestor = ancestor;
            }
        }
    }
    onPath.erase(decl.name);
}

inline InstantiationMap ancestorInstantiations(const IrProgram& program,
                                               const TypeDecl& decl) {
    InstantiationMap out;
    std::set<std::string> onPath;
    collectAncestorInstantiationsInto(program, decl, out, onPath);
    return out;
}

inline std::set<std::string> allAncestors(const IrProgram& program,
                                          const TypeDecl& decl) {
    std::set<std::string> out;
    InstantiationMap m = ancestorInstantiations(program, decl);
    for (const auto& [name, args] : m.args) {
        (void)args;
        out.insert(name);
    }
    return out;
}

}  // namespace xlang::ir
