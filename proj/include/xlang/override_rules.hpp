#pragma once

#include <optional>
#include <string>

#include "xlang/ir.hpp"
#include "xlang/signature.hpp"

// The universal override-rules table.
//
// For a class C and one inherited signature, the decision "may/must C declare
// an override?" depends only on (a) what C's superclass chain contributes -
// nothing, an abstract, a final or an overridable concrete method - and
// (b) what C's superinterfaces contribute. The table below is the strictest
// common contract accepted by javac, kotlinc, groovyc and scalac; generating
// against it keeps every emitted program valid in all four languages.
//
// CantStar marks the one asymmetric cell pair: a final superclass method next
// to a concrete interface method. Kotlin rejects that combination outright
// (the class can neither override the final method nor resolve the interface
// conflict), while the other languages accept the final method as the
// implementation. The adjustment is to retag a Kotlin subclass to Java and
// still emit no override.

namespace xlang::rules {

enum class SuperMethodKind { Null, Abstract, Final, Normal };

enum class InterfaceMethodConfig {
    MultiAllAbstract,   // >= 2 interface declarations, all abstract
    MultiSomeConcrete,  // >= 2 interface declarations, at least one concrete
    OneAbstract,
    OneConcrete,
    None,
};

enum class OverrideRequirement { Must, Can, Cant, CantStar, Impossible };

inline const char* toString(SuperMethodKind k) {
    switch (k) {
        case SuperMethodKind::Null: return "null";
        case SuperMethodKind::Abstract: return "abstract";
        case SuperMethodKind::Final: return "final";
        case SuperMethodKind::Normal: return "normal";
    }
    return "?";
}

inline const char* toString(InterfaceMethodConfig c) {
    switch (c) {
        case InterfaceMethodConfig::MultiAllAbstract: return "multiAllAbstract";
        case InterfaceMethodConfig::MultiSomeConcrete: return "multiSomeConcrete";
        case InterfaceMethodConfig::OneAbstract: return "oneAbstract";
        case InterfaceMethodConfig::OneConcrete: return "oneConcrete";
        case InterfaceMethodConfig::None: return "none";
    }
    return "?";
}

inline const char* toString(OverrideRequirement r) {
    switch (r) {
        case OverrideRequirement::Must: return "must";
        case OverrideRequirement::Can: return "can";
        case OverrideRequirement::Cant: return "cant";
        case OverrideRequirement::CantStar: return "cantStar";
        case OverrideRequirement::Impossible: return "impossible";
    }
    return "?";
}

inline OverrideRequirement classifyOverride(SuperMethodKind super,
                                            InterfaceMethodConfig interfaces) {
    using R = OverrideRequirement;
    using I = InterfaceMethodConfig;
    switch (super) {
        case SuperMethodKind::Null:
            switch (interfaces) {
                case I::MultiAllAbstract: return R::Must;
                case I::MultiSomeConcrete: return R::Must;
                case I::OneAbstract: return R::Must;
                case I::OneConcrete: return R::Can;
                case I::None: return R::Impossible;
            }
            break;
        case SuperMethodKind::Abstract:
            return R::Must;
        case SuperMethodKind::Final:
            switch (interfaces) {
                case I::MultiAllAbstract: return R::Cant;
                case I::MultiSomeConcrete: return R::CantStar;
                case I::OneAbstract: return R::Cant;
                case I::OneConcrete: return R::CantStar;
                case I::None: return R::Cant;
            }
            break;
        case SuperMethodKind::Normal:
            switch (interfaces) {
                case I::MultiAllAbstract: return R::Can;
                case I::MultiSomeConcrete: return R::Must;
                case I::OneAbstract: return R::Can;
                case I::OneConcrete: return R::Must;
                case I::None: return R::Can;
            }
            break;
    }
    return R::Impossible;
}

// Classify one signature entry from a declaration's inherited-method map.
struct OverrideContext {
    SuperMethodKind super;
    InterfaceMethodConfig interfaces;
};

inline SuperMethodKind superMethodKindOf(const ir::SignatureEntry& entry) {
    if (!entry.superClassMethod) return SuperMethodKind::Null;
    switch (entry.superClassMethod->kind) {
        case ir::MethodKind::Abstract: return SuperMethodKind::Abstract;
        case ir::MethodKind::Final: return SuperMethodKind::Final;
        case ir::MethodKind::Normal: return SuperMethodKind::Normal;
    }
    return SuperMethodKind::Normal;
}

inline InterfaceMethodConfig interfaceConfigOf(const ir::SignatureEntry& entry) {
    const auto& flows = entry.interfaceMethods;
    if (flows.empty()) return InterfaceMethodConfig::None;
    bool anyConcrete = false;
    for (const auto& f : flows) anyConcrete = anyConcrete || f.isConcrete();
    if (flows.size() == 1)
        return anyConcrete ? InterfaceMethodConfig::OneConcrete
                           : InterfaceMethodConfig::OneAbstract;
    return anyConcrete ? InterfaceMethodConfig::MultiSomeConcrete
                       : InterfaceMethodConfig::MultiAllAbstract;
}

inline OverrideContext contextOf(const ir::SignatureEntry& entry) {
    return {superMethodKindOf(entry), interfaceConfigOf(entry)};
}

inline OverrideRequirement classifyOverride(const ir::SignatureEntry& entry) {
    OverrideContext ctx = contextOf(entry);
    return classifyOverride(ctx.super, ctx.interfaces);
}

// Kotlin cannot express the CantStar cells; retag the declaration to Java and
// emit no override. Returns true when the language was changed.
inline bool applyCantStarAdjustment(ir::TypeDecl& decl, OverrideRequirement req) {
    if (req == OverrideRequirement::CantStar && decl.lang == ir::Lang::Kotlin) {
        decl.lang = ir::Lang::Java;
        return true;
    }
    return false;
}

}  // namespace xlang::rules
