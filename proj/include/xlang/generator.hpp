#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/override_rules.hpp"
#include "xlang/rng.hpp"
#include "xlang/signature.hpp"

// Seeded program generator.
//
// Declarations are produced one at a time, newest-depends-on-oldest, so the
// supertype graph is acyclic by construction. Per declaration the draw order
// is fixed: kind, language, modifier, type parameters, supertypes, member
// methods, overrides. Overrides are decided per inherited signature from the
// rules table, which keeps every generated program compilable by all target
// languages at once.
//
// Two constraints the table alone does not give you:
//  * method base names come from one program-global counter, so two methods
//    with the same name always trace back to the same root declaration -
//    independent same-name methods could meet in a subclass as an
//    unoverridable same-erasure clash;
//  * a declaration's supertypes must instantiate every shared transitive
//    ancestor identically (redrawn up to supertypeRetryLimit, then the
//    interface picks are dropped).

namespace xlang::gen {

struct GenConfig {
    std::pair<int, int> declCount{4, 12};
    double interfaceRatio{0.5};        // P(new declaration is an interface)
    double parentClassProb{0.3};       // P(class gets a parent class)
    std::pair<int, int> interfaceCount{0, 3};
    std::pair<int, int> typeParamCount{0, 2};
    std::pair<int, int> methodCount{1, 3};
    std::pair<int, int> paramCount{0, 2};
    double canOverrideProb{0.5};       // taken on CAN cells
    std::vector<ir::Lang> languages{ir::Lang::Java, ir::Lang::Kotlin};
    // When set, abstract classes may coin-flip MUST cells away (their
    // subclasses inherit the obligation). Default keeps MUST strict.
    bool abstractClassesMayDeferMust{false};
    int supertypeRetryLimit{8};
};

inline void validateConfig(const GenConfig& cfg) {
    auto checkRange = [](std::pair<int, int> r, const char* what) {
        if (r.first < 0 || r.second < r.first)
            throw ConfigError(std::string(what) + " range is malformed");
    };
    checkRange(cfg.declCount, "declCount");
    checkRange(cfg.interfaceCount, "interfaceCount");
    checkRange(cfg.typeParamCount, "typeParamCount");
    checkRange(cfg.methodCount, "methodCount");
    checkRange(cfg.paramCount, "paramCount");
    for (double p : {cfg.interfaceRatio, cfg.parentClassProb, cfg.canOverrideProb})
        if (p < 0.0 || p > 1.0) throw ConfigError("probability out of [0,1]");
    if (cfg.languages.empty()) throw ConfigError("languages must not be empty");
    std::vector<ir::Lang> distinct;
    for (ir::Lang l : cfg.languages)
        if (std::find(distinct.begin(), distinct.end(), l) == distinct.end())
            distinct.push_back(l);
    if (std::find(distinct.begin(), distinct.end(), ir::Lang::Java) ==
        distinct.end())
        throw ConfigError("languages must include java");
    if (distinct.size() > 2)
        throw ConfigError("languages must be java plus at most one other");
    if (cfg.supertypeRetryLimit < 1)
        throw ConfigError("supertypeRetryLimit must be >= 1");
}

inline ir::Json toJson(const GenConfig& cfg) {
    ir::Json j;
    j["declCount"] = {cfg.declCount.first, cfg.declCount.second};
    j["interfaceRatio"] = cfg.interfaceRatio;
    j["parentClassProb"] = cfg.parentClassProb;
    j["interfaceCount"] = {cfg.interfaceCount.first, cfg.interfaceCount.second};
    j["typeParamCount"] = {cfg.typeParamCount.first, cfg.typeParamCount.second};
    j["methodCount"] = {cfg.methodCount.first, cfg.methodCount.second};
    j["paramCount"] = {cfg.paramCount.first, cfg.paramCount.second};
    j["canOverrideProb"] = cfg.canOverrideProb;
    ir::Json langs = ir::Json::array();
    for (ir::Lang l : cfg.languages) langs.push_back(ir::toString(l));
    j["languages"] = std::move(langs);
    j["abstractClassesMayDeferMust"] = cfg.abstractClassesMayDeferMust;
    j["supertypeRetryLimit"] = cfg.supertypeRetryLimit;
    return j;
}

inline GenConfig genConfigFromJson(const ir::Json& j) {
    GenConfig cfg;
    auto range = [&](const char* key, std::pair<int, int> fallback) {
        if (!j.contains(key)) return fallback;
        const auto& r = j.at(key);
        if (!r.is_array() || r.size() != 2)
            throw ConfigError(std::string(key) + " must be [lo, hi]");
        return std::make_pair(r[0].get<int>(), r[1].get<int>());
    };
    try {
        cfg.declCount = range("declCount", cfg.declCount);
        cfg.interfaceRatio = j.value("interfaceRatio", cfg.interfaceRatio);
        cfg.parentClassProb = j.value("parentClassProb", cfg.parentClassProb);
        cfg.interfaceCount = range("interfaceCount", cfg.interfaceCount);
        cfg.typeParamCount = range("typeParamCount", cfg.typeParamCount);
        cfg.methodCount = range("methodCount", cfg.methodCount);
        cfg.paramCount = range("paramCount", cfg.paramCount);
        cfg.canOverrideProb = j.value("canOverrideProb", cfg.canOverrideProb);
        if (j.contains("languages")) {
            cfg.languages.clear();
            for (const auto& l : j.at("languages"))
                cfg.languages.push_back(
                    ir::detail::langFromString(l.get<std::string>()));
        }
        cfg.abstractClassesMayDeferMust =
            j.value("abstractClassesMayDeferMust", cfg.abstractClassesMayDeferMust);
        cfg.supertypeRetryLimit =
            j.value("supertypeRetryLimit", cfg.supertypeRetryLimit);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad generator config: ") + e.what());
    }
    validateConfig(cfg);
    return cfg;
}

namespace detail {

struct NameCounters {
    int classes = 0;
    int interfaces = 0;
    int typeParams = 0;
    int methods = 0;
};

// Types usable as a type argument: Top, String, the declaration's own type
// parameters and previously generated non-generic declarations. Int stays
// out of argument positions (its boxed/primitive split is not uniform across
// the four languages); Unit stays return-only.
inline ir::TypeRef drawTypeArg(Rng& rng, const ir::IrProgram& prog,
                               const ir::TypeDecl& decl) {
    std::vector<ir::TypeRef> pool = {ir::topType(), ir::stringType()};
    for (const auto& tp : decl.typeParams)
        pool.push_back(ir::TypeRef::typeParam(tp.name));
    for (const auto& prior : prog.declarations)
        if (prior.typeParams.empty())
            pool.push_back(ir::TypeRef::classType(prior.name));
    return rng.pick(pool);
}

// Value types for parameters and returns. May instantiate a previously
// generated generic declaration one level deep.
inline ir::TypeRef drawValueType(Rng& rng, const ir::IrProgram& prog,
                                 const ir::TypeDecl& decl, bool allowUnit) {
    struct Option {
        enum class Tag { BuiltinT, Param, Decl } tag;
        ir::Builtin builtin{ir::Builtin::Top};
        const ir::TypeDecl* target{nullptr};
        std::string param;
    };
    std::vector<Option> options;
    for (ir::Builtin b : {ir::Builtin::Top, ir::Builtin::String, ir::Builtin::Int})
        options.push_back({Option::Tag::BuiltinT, b, nullptr, {}});
    if (allowUnit)
        options.push_back({Option::Tag::BuiltinT, ir::Builtin::Unit, nullptr, {}});
    for (const auto& tp : decl.typeParams)
        options.push_back({Option::Tag::Param, ir::Builtin::Top, nullptr, tp.name});
    for (const auto& prior : prog.declarations)
        options.push_back({Option::Tag::Decl, ir::Builtin::Top, &prior, {}});

    const Option& chosen = options[rng.below(options.size())];
    switch (chosen.tag) {
        case Option::Tag::BuiltinT:
            return ir::TypeRef::builtinType(chosen.builtin);
        case Option::Tag::Param:
            return ir::TypeRef::typeParam(chosen.param);
        case Option::Tag::Decl: {
            std::vector<ir::TypeRef> args;
            for (std::size_t i = 0; i < chosen.target->typeParams.size(); ++i)
                args.push_back(drawTypeArg(rng, prog, decl));
            return ir::TypeRef::classType(chosen.target->name, std::move(args));
        }
    }
    return ir::topType();
}

inline void instantiateSupertype(Rng& rng, const ir::IrProgram& prog,
                                 const ir::TypeDecl& decl, ir::SuperTypeRef& super,
                                 const ir::TypeDecl& target) {
    super.args.clear();
    for (std::size_t i = 0; i < target.typeParams.size(); ++i)
        super.args.push_back(drawTypeArg(rng, prog, decl));
}

inline bool supertypesConsistent(ir::IrProgram& prog, const ir::TypeDecl& decl) {
    prog.declarations.push_back(decl);
    bool ok = !ir::ancestorInstantiations(prog, prog.declarations.back()).conflict;
    prog.declarations.pop_back();
    return ok;
}

inline void chooseSupertypes(Rng& rng, ir::IrProgram& prog, ir::TypeDecl& decl,
                             const GenConfig& cfg) {
    // Indices, not pointers: the consistency probe temporarily appends to
    // prog.declarations, which may reallocate.
    std::vector<std::size_t> parentPool;
    std::vector<std::size_t> interfacePool;
    for (std::size_t i = 0; i < prog.declarations.size(); ++i) {
        const auto& prior = prog.declarations[i];
        if (prior.kind == ir::DeclKind::Class &&
            prior.modifier != ir::ClassModifier::Final)
            parentPool.push_back(i);
        if (prior.kind == ir::DeclKind::Interface)
            interfacePool.push_back(i);
    }

    for (int attempt = 0; attempt < cfg.supertypeRetryLimit; ++attempt) {
        decl.supertypes.clear();
        if (decl.kind == ir::DeclKind::Class && rng.chance(cfg.parentClassProb) &&
            !parentPool.empty()) {
            const ir::TypeDecl& parent =
                prog.declarations[parentPool[rng.below(parentPool.size())]];
            ir::SuperTypeRef super{parent.name, {}};
            instantiateSupertype(rng, prog, decl, super, parent);
            decl.supertypes.push_back(std::move(super));
        }
        int want = rng.range(cfg.interfaceCount);
        want = std::min<int>(want, static_cast<int>(interfacePool.size()));
        // partial Fisher-Yates: the first `want` slots are the picks
        std::vector<std::size_t> order = interfacePool;
        for (int k = 0; k < want; ++k) {
            std::size_t j = static_cast<std::size_t>(k) +
                            rng.below(order.size() - static_cast<std::size_t>(k));
            std::swap(order[static_cast<std::size_t>(k)], order[j]);
            const ir::TypeDecl& iface =
                prog.declarations[order[static_cast<std::size_t>(k)]];
            ir::SuperTypeRef super{iface.name, {}};
            instantiateSupertype(rng, prog, decl, super, iface);
            decl.supertypes.push_back(std::move(super));
        }
        if (supertypesConsistent(prog, decl)) return;
    }

    // Retries exhausted: fall back to at most a parent class. A single
    // supertype cannot introduce an instantiation conflict.
    decl.supertypes.clear();
    if (decl.kind == ir::DeclKind::Class && !parentPool.empty() &&
        rng.chance(cfg.parentClassProb)) {
        const ir::TypeDecl& parent =
            prog.declarations[parentPool[rng.below(parentPool.size())]];
        ir::SuperTypeRef super{parent.name, {}};
        instantiateSupertype(rng, prog, decl, super, parent);
        decl.supertypes.push_back(std::move(super));
    }
}

inline ir::MethodKind drawMethodKind(Rng& rng, const ir::TypeDecl& decl) {
    if (decl.kind == ir::DeclKind::Interface)
        return rng.below(2) == 0 ? ir::MethodKind::Abstract : ir::MethodKind::Normal;
    if (decl.modifier == ir::ClassModifier::Abstract) {
        switch (rng.below(3)) {
            case 0: return ir::MethodKind::Abstract;
            case 1: return ir::MethodKind::Final;
            default: return ir::MethodKind::Normal;
        }
    }
    return rng.below(2) == 0 ? ir::MethodKind::Final : ir::MethodKind::Normal;
}

inline void generateMethods(Rng& rng, ir::IrProgram& prog, ir::TypeDecl& decl,
                            const GenConfig& cfg, NameCounters& names) {
    int count = rng.range(cfg.methodCount);
    for (int i = 0; i < count; ++i) {
        ir::MethodDecl m;
        m.name = names.methods == 0 ? "func"
                                    : "func" + std::to_string(names.methods);
        ++names.methods;
        m.kind = drawMethodKind(rng, decl);
        int params = rng.range(cfg.paramCount);
        for (int pIdx = 0; pIdx < params; ++pIdx)
            m.params.push_back({"arg" + std::to_string(pIdx),
                                drawValueType(rng, prog, decl, false)});
        m.returnType = drawValueType(rng, prog, decl, true);
        decl.methods.push_back(std::move(m));
    }
}

inline ir::MethodDecl makeOverrideMethod(const ir::SignatureEntry& entry) {
    const ir::FlowMethod* source = nullptr;
    if (entry.superClassMethod) source = &*entry.superClassMethod;
    if (!source)
        for (const auto& f : entry.interfaceMethods)
            if (f.isConcrete()) {
                source = &f;
                break;
            }
    if (!source) source = &entry.interfaceMethods.front();

    ir::MethodDecl m;
    m.name = entry.signature.name;
    m.kind = ir::MethodKind::Normal;
    for (std::size_t i = 0; i < entry.signature.paramTypes.size(); ++i)
        m.params.push_back(
            {"arg" + std::to_string(i), entry.signature.paramTypes[i]});
    m.returnType = source->returnType;
    auto addRef = [&m](const std::string& decl, const std::string& method) {
        for (const auto& existing : m.overrides)
            if (existing.decl == decl && existing.method == method) return;
        m.overrides.push_back({decl, method});
    };
    if (entry.superClassMethod)
        addRef(entry.superClassMethod->ownerDecl,
               entry.superClassMethod->methodName);
    for (const auto& f : entry.interfaceMethods)
        addRef(f.ownerDecl, f.methodName);
    return m;
}

inline void emitOverrides(Rng& rng, ir::IrProgram& prog, ir::TypeDecl& decl,
                          const GenConfig& cfg) {
    if (decl.supertypes.empty()) return;
    prog.declarations.push_back(decl);
    ir::SignatureMap map =
        ir::collectMethodSignatureMap(prog, prog.declarations.back());
    prog.declarations.pop_back();

    for (const auto& [key, entry] : map) {
        (void)key;
        bool doOverride = false;
        if (decl.kind == ir::DeclKind::Interface) {
            // Interfaces skip the table except for the one lethal mix: an
            // abstract and a concrete declaration meeting unresolved.
            auto config = rules::interfaceConfigOf(entry);
            doOverride = config == rules::InterfaceMethodConfig::MultiSomeConcrete
                             ? true
                             : rng.chance(cfg.canOverrideProb);
        } else {
            rules::OverrideRequirement req = rules::classifyOverride(entry);
            rules::applyCantStarAdjustment(decl, req);
            switch (req) {
                case rules::OverrideRequirement::Must:
                    doOverride = true;
                    if (cfg.abstractClassesMayDeferMust &&
                        decl.modifier == ir::ClassModifier::Abstract)
                        doOverride = rng.chance(0.5);
                    break;
                case rules::OverrideRequirement::Can:
                    doOverride = rng.chance(cfg.canOverrideProb);
                    break;
                case rules::OverrideRequirement::Cant:
                case rules::OverrideRequirement::CantStar:
                case rules::OverrideRequirement::Impossible:
                    break;
            }
        }
        if (doOverride) decl.methods.push_back(makeOverrideMethod(entry));
    }
}

}  // namespace detail

inline ir::IrProgram generateProgram(std::uint64_t seed,
                                     const GenConfig& cfg = {}) {
    validateConfig(cfg);
    Rng rng(Rng::deriveSeed(seed, 1));
    ir::IrProgram prog;
    prog.seed = seed;
    detail::NameCounters names;

    const int declCount = rng.range(cfg.declCount);
    for (int i = 0; i < declCount; ++i) {
        ir::TypeDecl decl;
        bool isInterface = rng.chance(cfg.interfaceRatio);
        decl.kind = isInterface ? ir::DeclKind::Interface : ir::DeclKind::Class;
        decl.name = isInterface ? "I" + std::to_string(names.interfaces++)
                                : "A" + std::to_string(names.classes++);
        decl.lang = cfg.languages[rng.below(cfg.languages.size())];
        if (!isInterface) {
            switch (rng.below(3)) {
                case 0: decl.modifier = ir::ClassModifier::Open; break;
                case 1: decl.modifier = ir::ClassModifier::Final; break;
                default: decl.modifier = ir::ClassModifier::Abstract; break;
            }
        }
        int tpCount = rng.range(cfg.typeParamCount);
        for (int t = 0; t < tpCount; ++t)
            decl.typeParams.push_back({"T" + std::to_string(names.typeParams++)});

        detail::chooseSupertypes(rng, prog, decl, cfg);
        detail::generateMethods(rng, prog, decl, cfg, names);
        detail::emitOverrides(rng, prog, decl, cfg);

        prog.declarations.push_back(std::move(decl));
    }
    return prog;
}

}  // namespace xlang::gen
