#pragma once

// Independent re-derivation of the override obligations a generated program
// must satisfy. Deliberately shares no bookkeeping with the generator: it
// recomputes the inherited signature map for every declaration and classifies
// each entry through the rules table, then checks the declaration's own
// methods against the verdict:
//
//   MUST      -> exactly one own method with that signature, and its override
//                references must name every contributing ancestor flow
//   CANT      -> no own method with that signature
//   CANT*     -> as CANT, and the declaration must not be Kotlin (the
//                generator retags such declarations)
//   CAN       -> either way; if present, same reference completeness as MUST
//   interface -> forced override only when abstract and concrete inherited
//                flows meet unresolved (some-concrete multi-source cell)
//
// Returns a description of the first violation, or nullopt if conformant.

#include <optional>
#include <set>
#include <string>
#include <utility>

#include "xlang/ir.hpp"
#include "xlang/override_rules.hpp"
#include "xlang/signature.hpp"

namespace xlang::test {

inline std::optional<std::string> findTableViolation(
    const ir::IrProgram& prog, bool strictAbstractMust = true) {
    for (const auto& decl : prog.declarations) {
        // Own signatures must be unique regardless of inheritance.
        std::set<std::string> ownKeys;
        for (const auto& m : decl.methods)
            if (!ownKeys.insert(ir::signatureOf(m).key()).second)
                return decl.name + " declares duplicate signature " +
                       ir::signatureOf(m).key();

        if (decl.supertypes.empty()) {
            for (const auto& m : decl.methods)
                if (!m.overrides.empty())
                    return decl.name + "::" + m.name +
                           " claims an override without supertypes";
            continue;
        }

        ir::SignatureMap map = ir::collectMethodSignatureMap(prog, decl);
        for (const auto& [key, entry] : map) {
            const ir::MethodDecl* own = nullptr;
            for (const auto& m : decl.methods)
                if (ir::signatureOf(m).key() == key) {
                    own = &m;
                    break;
                }

            bool required = false;
            bool forbidden = false;
            if (decl.kind == ir::DeclKind::Interface) {
                required = rules::interfaceConfigOf(entry) ==
                           rules::InterfaceMethodConfig::MultiSomeConcrete;
            } else {
                switch (rules::classifyOverride(entry)) {
                    case rules::OverrideRequirement::Must:
                        required = strictAbstractMust ||
                                   decl.modifier != ir::ClassModifier::Abstract;
                        break;
                    case rules::OverrideRequirement::CantStar:
                        if (decl.lang == ir::Lang::Kotlin)
                            return decl.name +
                                   " is Kotlin but inherits a final "
                                   "implementation alongside interface " +
                                   key;
                        forbidden = true;
                        break;
                    case rules::OverrideRequirement::Cant:
                        forbidden = true;
                        break;
                    case rules::OverrideRequirement::Can:
                        break;
                    case rules::OverrideRequirement::Impossible:
                        return decl.name + " has an impossible-cell entry " + key;
                }
            }

            if (required && !own)
                return decl.name + " misses a mandatory override of " + key;
            if (forbidden && own)
                return decl.name + " overrides unoverridable " + key;

            if (own && !own->overrides.empty()) {
                std::set<std::pair<std::string, std::string>> expected;
                if (entry.superClassMethod)
                    expected.insert({entry.superClassMethod->ownerDecl,
                                     entry.superClassMethod->methodName});
                for (const auto& f : entry.interfaceMethods)
                    expected.insert({f.ownerDecl, f.methodName});
                std::set<std::pair<std::string, std::string>> actual;
                for (const auto& r : own->overrides)
                    actual.insert({r.decl, r.method});
                if (expected != actual)
                    return decl.name + "::" + own->name +
                           " override references do not match the inherited "
                           "flows for " +
                           key;
            } else if (own && required) {
                return decl.name + "::" + own->name +
                       " shadows a mandatory override without references";
            }
        }
    }
    return std::nullopt;
}

}  // namespace xlang::test
