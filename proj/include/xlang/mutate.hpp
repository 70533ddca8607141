#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/rng.hpp"

// Program mutators. Each one makes a single seeded change and returns the
// mutated program together with a replayable record: every edit stores the
// JSON-pointer path it touched plus the canonical subtree before and after.
// Replaying applies the afters (verifying the befores first); inverting
// applies the befores in reverse. A mutation therefore never needs the
// original generator state to be reproduced or undone.
//
// Mutants are only required to stay structurally sound. Breaking semantic
// properties - override signatures drifting apart, abstract members left
// unimplemented, Kotlin declarations inheriting final/default mixes - is the
// point: those are the shapes compilers disagree about.

namespace xlang::mut {

enum class MutatorKind {
    LangShuffle,            // retag one declaration's language
    FunctionRemoval,        // drop one method, scrub dangling override refs
    TypeChanger,            // replace one type node anywhere in the program
    SupertypeOrderShuffle,  // permute one declaration's supertype list
};

inline std::string toString(MutatorKind k) {
    switch (k) {
        case MutatorKind::LangShuffle: return "lang-shuffle";
        case MutatorKind::FunctionRemoval: return "function-removal";
        case MutatorKind::TypeChanger: return "type-changer";
        case MutatorKind::SupertypeOrderShuffle: return "supertype-order-shuffle";
    }
    return "?";
}

inline MutatorKind mutatorKindFromString(const std::string& s) {
    if (s == "lang-shuffle") return MutatorKind::LangShuffle;
    if (s == "function-removal") return MutatorKind::FunctionRemoval;
    if (s == "type-changer") return MutatorKind::TypeChanger;
    if (s == "supertype-order-shuffle") return MutatorKind::SupertypeOrderShuffle;
    throw ConfigError("unknown mutator: " + s);
}

struct MutateOptions {
    // Pool the language retagger draws from.
    std::vector<ir::Lang> languages{ir::Lang::Java, ir::Lang::Kotlin,
                                    ir::Lang::Groovy, ir::Lang::Scala};
    // Supertype reordering stays opt-in: renderers that preserve declaration
    // order (Kotlin, Scala) turn it into a pure source-level permutation, so
    // it earns its keep as a probe rather than a default mutator.
    std::vector<MutatorKind> enabled{MutatorKind::LangShuffle,
                                     MutatorKind::FunctionRemoval,
                                     MutatorKind::TypeChanger};
};

struct MutationResult {
    ir::IrProgram program;
    ir::MutationRecord record;
};

namespace detail {

inline ir::Json methodsJson(const ir::TypeDecl& d) {
    ir::Json arr = ir::Json::array();
    for (const auto& m : d.methods) arr.push_back(ir::toJson(m));
    return arr;
}

inline ir::Json supertypesJson(const ir::TypeDecl& d) {
    ir::Json arr = ir::Json::array();
    for (const auto& s : d.supertypes) {
        ir::Json js;
        js["target"] = s.target;
        ir::Json args = ir::Json::array();
        for (const auto& a : s.args) args.push_back(ir::toJson(a));
        js["args"] = std::move(args);
        arr.push_back(std::move(js));
    }
    return arr;
}

inline ir::Json overridesJson(const ir::MethodDecl& m) {
    ir::Json arr = ir::Json::array();
    for (const auto& r : m.overrides)
        arr.push_back(ir::Json{{"decl", r.decl}, {"method", r.method}});
    return arr;
}

inline MutationResult langShuffle(const ir::IrProgram& prog, Rng& rng,
                                  const MutateOptions& opts) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < prog.declarations.size(); ++i) {
        for (ir::Lang l : opts.languages)
            if (l != prog.declarations[i].lang) {
                candidates.push_back(i);
                break;
            }
    }
    if (candidates.empty())
        throw NoMutationPossibleError("no declaration can change language");
    std::size_t idx = candidates[rng.below(candidates.size())];

    std::vector<ir::Lang> alternatives;
    for (ir::Lang l : opts.languages)
        if (l != prog.declarations[idx].lang &&
            std::find(alternatives.begin(), alternatives.end(), l) ==
                alternatives.end())
            alternatives.push_back(l);
    ir::Lang next = alternatives[rng.below(alternatives.size())];

    MutationResult result{prog, {}};
    ir::TypeDecl& decl = result.program.declarations[idx];
    result.record.edits.push_back(
        {"/declarations/" + std::to_string(idx) + "/lang",
         ir::Json(ir::toString(decl.lang)), ir::Json(ir::toString(next))});
    decl.lang = next;
    return result;
}

inline MutationResult functionRemoval(const ir::IrProgram& prog, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < prog.declarations.size(); ++i)
        for (std::size_t j = 0; j < prog.declarations[i].methods.size(); ++j)
            candidates.push_back({i, j});
    if (candidates.empty())
        throw NoMutationPossibleError("program has no methods");
    auto [declIdx, methodIdx] = candidates[rng.below(candidates.size())];

    MutationResult result{prog, {}};
    ir::TypeDecl& owner = result.program.declarations[declIdx];
    const std::string ownerName = owner.name;
    const std::string methodName = owner.methods[methodIdx].name;

    auto scrub = [&](ir::MethodDecl& m) {
        auto it = std::remove_if(m.overrides.begin(), m.overrides.end(),
                                 [&](const ir::OverrideRef& r) {
                                     return r.decl == ownerName &&
                                            r.method == methodName;
                                 });
        bool changed = it != m.overrides.end();
        m.overrides.erase(it, m.overrides.end());
        return changed;
    };

    ir::Json beforeMethods = methodsJson(owner);
    owner.methods.erase(owner.methods.begin() +
                        static_cast<std::ptrdiff_t>(methodIdx));
    for (auto& m : owner.methods) scrub(m);
    result.record.edits.push_back(
        {"/declarations/" + std::to_string(declIdx) + "/methods",
         std::move(beforeMethods), methodsJson(owner)});

    for (std::size_t d = 0; d < result.program.declarations.size(); ++d) {
        if (d == declIdx) continue;
        auto& decl = result.program.declarations[d];
        for (std::size_t k = 0; k < decl.methods.size(); ++k) {
            ir::Json before = overridesJson(decl.methods[k]);
            if (scrub(decl.methods[k]))
                result.record.edits.push_back(
                    {"/declarations/" + std::to_string(d) + "/methods/" +
                         std::to_string(k) + "/overrides",
                     std::move(before), overridesJson(decl.methods[k])});
        }
    }
    return result;
}

struct TypeSite {
    std::string path;
    ir::TypeRef* node;
    std::size_t declIdx;
    bool isReturnRoot;
};

inline void collectTypeNodes(ir::TypeRef& t, const std::string& base,
                             std::size_t declIdx, bool isReturnRoot,
                             std::vector<TypeSite>& out) {
    out.push_back({base, &t, declIdx, isReturnRoot});
    for (std::size_t i = 0; i < t.args.size(); ++i)
        collectTypeNodes(t.args[i], base + "/args/" + std::to_string(i), declIdx,
                         false, out);
}

inline MutationResult typeChanger(const ir::IrProgram& prog, Rng& rng) {
    MutationResult result{prog, {}};
    std::vector<TypeSite> sites;
    for (std::size_t i = 0; i < result.program.declarations.size(); ++i) {
        auto& decl = result.program.declarations[i];
        const std::string base = "/declarations/" + std::to_string(i);
        for (std::size_t s = 0; s < decl.supertypes.size(); ++s)
            for (std::size_t a = 0; a < decl.supertypes[s].args.size(); ++a)
                collectTypeNodes(decl.supertypes[s].args[a],
                                 base + "/supertypes/" + std::to_string(s) +
                                     "/args/" + std::to_string(a),
                                 i, false, sites);
        for (std::size_t j = 0; j < decl.methods.size(); ++j) {
            auto& m = decl.methods[j];
            const std::string mBase = base + "/methods/" + std::to_string(j);
            for (std::size_t k = 0; k < m.params.size(); ++k)
                collectTypeNodes(m.params[k].type,
                                 mBase + "/params/" + std::to_string(k) + "/type",
                                 i, false, sites);
            collectTypeNodes(m.returnType, mBase + "/returnType", i, true, sites);
        }
    }
    if (sites.empty())
        throw NoMutationPossibleError("program has no type nodes");
    const TypeSite& site = sites[rng.below(sites.size())];

    std::vector<ir::TypeRef> pool = {ir::topType(), ir::stringType(),
                                     ir::intType()};
    if (site.isReturnRoot) pool.push_back(ir::unitType());
    for (const auto& tp : result.program.declarations[site.declIdx].typeParams)
        pool.push_back(ir::TypeRef::typeParam(tp.name));
    for (const auto& d : result.program.declarations)
        if (d.typeParams.empty()) pool.push_back(ir::TypeRef::classType(d.name));
    std::vector<ir::TypeRef> usable;
    for (auto& t : pool)
        if (t.key() != site.node->key()) usable.push_back(std::move(t));
    const ir::TypeRef& replacement = usable[rng.below(usable.size())];

    result.record.edits.push_back(
        {site.path, ir::toJson(*site.node), ir::toJson(replacement)});
    *site.node = replacement;
    return result;
}

inline MutationResult supertypeOrderShuffle(const ir::IrProgram& prog, Rng& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < prog.declarations.size(); ++i)
        if (prog.declarations[i].supertypes.size() >= 2) candidates.push_back(i);
    if (candidates.empty())
        throw NoMutationPossibleError("no declaration has two or more supertypes");
    std::size_t idx = candidates[rng.below(candidates.size())];

    MutationResult result{prog, {}};
    ir::TypeDecl& decl = result.program.declarations[idx];
    ir::Json before = supertypesJson(decl);

    std::vector<ir::SuperTypeRef> original = decl.supertypes;
    for (int attempt = 0;; ++attempt) {
        rng.shuffle(decl.supertypes);
        if (decl.supertypes != original) break;
        if (attempt >= 64)
            throw NoMutationPossibleError(
                "supertype list of " + decl.name + " has no distinct ordering");
    }

    result.record.edits.push_back(
        {"/declarations/" + std::to_string(idx) + "/supertypes",
         std::move(before), supertypesJson(decl)});
    return result;
}

}  // namespace detail

inline MutationResult applyMutator(MutatorKind kind, const ir::IrProgram& prog,
                                   std::uint64_t seed,
                                   const MutateOptions& opts = {}) {
    Rng rng(Rng::deriveSeed(seed, static_cast<std::uint64_t>(kind) + 2));
    MutationResult result = [&] {
        switch (kind) {
            case MutatorKind::LangShuffle:
                return detail::langShuffle(prog, rng, opts);
            case MutatorKind::FunctionRemoval:
                return detail::functionRemoval(prog, rng);
            case MutatorKind::TypeChanger:
                return detail::typeChanger(prog, rng);
            case MutatorKind::SupertypeOrderShuffle:
                return detail::supertypeOrderShuffle(prog, rng);
        }
        throw ConfigError("unknown mutator kind");
    }();
    result.record.mutator = toString(kind);
    result.record.seed = seed;
    result.program.provenance.push_back(result.record);
    return result;
}

// Tries the enabled mutators in a seeded random order and returns the first
// applicable one. Throws NoMutationPossibleError when none applies.
inline MutationResult applyAnyMutator(const ir::IrProgram& prog,
                                      std::uint64_t seed,
                                      const MutateOptions& opts = {}) {
    if (opts.enabled.empty()) throw ConfigError("no mutators enabled");
    std::vector<MutatorKind> order = opts.enabled;
    Rng orderRng(Rng::deriveSeed(seed, 1));
    orderRng.shuffle(order);
    for (MutatorKind kind : order) {
        try {
            return applyMutator(kind, prog, seed, opts);
        } catch (const NoMutationPossibleError&) {
            continue;
        }
    }
    throw NoMutationPossibleError("no enabled mutator applies to this program");
}

// Replays a recorded mutation against a program. Every edit's stored
// before-subtree must match the current document exactly.
inline ir::IrProgram applyMutation(const ir::IrProgram& prog,
                                   const ir::MutationRecord& record) {
    ir::Json doc = ir::toJson(prog);
    for (const auto& edit : record.edits) {
        ir::Json::json_pointer ptr(edit.path);
        if (!doc.contains(ptr))
            throw ReplayMismatchError("no node at " + edit.path);
        if (doc.at(ptr) != edit.before)
            throw ReplayMismatchError("state mismatch at " + edit.path);
        doc[ptr] = edit.after;
    }
    ir::IrProgram next = ir::programFromJson(doc);
    next.provenance.push_back(record);
    return next;
}

// Undoes a recorded mutation: edits are reverted in reverse order and the
// record is popped from the provenance trail.
inline ir::IrProgram invertMutation(const ir::IrProgram& prog,
                                    const ir::MutationRecord& record) {
    ir::Json doc = ir::toJson(prog);
    for (auto it = record.edits.rbegin(); it != record.edits.rend(); ++it) {
        ir::Json::json_pointer ptr(it->path);
        if (!doc.contains(ptr))
            throw ReplayMismatchError("no node at " + it->path);
        if (doc.at(ptr) != it->after)
            throw ReplayMismatchError("state mismatch at " + it->path);
        doc[ptr] = it->before;
    }
    ir::IrProgram previous = ir::programFromJson(doc);
    if (!previous.provenance.empty() &&
        ir::toJson(previous.provenance.back()) == ir::toJson(record))
        previous.provenance.pop_back();
    return previous;
}

}  // namespace xlang::mut
