#pragma once

#include <array>
#include <functional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/render.hpp"
#include "xlang/validate.hpp"

// Test-case minimization. Starting from a program the oracle flags, greedily
// apply shrinking edits and keep each one only if the oracle still reports
// the same class of finding with the same fingerprint. Edits that surface a
// *different* finding are recorded as forks (new cases worth testing in
// their own right) and rolled back, so the main trajectory never drifts onto
// another bug.
//
// Passes, in priority order:
//   remove-method          drop one method (plus override refs to it)
//   flatten-language       move one declaration to the pivot language
//   replace-custom-type    swap a class-type site for String, then Object
//   concretize-type-param  swap a type-parameter site for String, then Object
//   remove-type-param      drop an unused type parameter (and matching args)
//   remove-decl            drop a declaration nothing references
//
// Every pass strictly shrinks the measure (decl count, method count, type
// params declared, type-param uses, class-type sites, non-pivot-language
// decls) in lexicographic order, so the loop terminates; it stops when no
// candidate edit is kept, which makes the result 1-minimal for the pass set.
// Supertype reordering cannot shrink anything, so it runs only as a
// post-convergence probe that can discover forks.

namespace xlang::minimize {

struct OracleResult {
    bool finding = false;
    std::string verdictClass;  // how the oracle classified it (e.g. a verdict)
    std::string fingerprint;   // dedup key for "the same" finding
};

using MinimizeOracle = std::function<OracleResult(const ir::IrProgram&,
                                                  const render::SourceBundle&)>;

struct MinimizeOptions {
    ir::Lang pivotLang = ir::Lang::Java;
    render::RenderOptions renderOptions{};
    bool probeSupertypeOrder = true;
    std::size_t maxOracleCalls = 200000;
};

struct MinimizeStep {
    std::string pass;
    std::string detail;
    bool kept = false;
};

struct MinimizeFork {
    ir::IrProgram program;
    OracleResult result;
    std::string pass;
    std::string detail;
};

struct MinimizeOutcome {
    ir::IrProgram program;
    OracleResult baseline;
    std::vector<MinimizeStep> trail;
    std::vector<MinimizeFork> forks;
    std::size_t oracleCalls = 0;
};

namespace detail {

struct Candidate {
    std::string pass;
    std::string detail;
    ir::IrProgram program;
};

using Measure = std::array<std::size_t, 6>;

inline void countTypeSites(const ir::TypeRef& t, std::size_t& tpUses,
                           std::size_t& classSites) {
    if (t.kind == ir::TypeKind::TypeParam) ++tpUses;
    if (t.kind == ir::TypeKind::ClassType) ++classSites;
    for (const auto& a : t.args) countTypeSites(a, tpUses, classSites);
}

inline Measure measureOf(const ir::IrProgram& p, ir::Lang pivot) {
    Measure m{p.declarations.size(), 0, 0, 0, 0, 0};
    for (const auto& d : p.declarations) {
        m[1] += d.methods.size();
        m[2] += d.typeParams.size();
        if (d.lang != pivot) ++m[5];
        for (const auto& s : d.supertypes)
            for (const auto& a : s.args) countTypeSites(a, m[3], m[4]);
        for (const auto& meth : d.methods) {
            for (const auto& param : meth.params)
                countTypeSites(param.type, m[3], m[4]);
            countTypeSites(meth.returnType, m[3], m[4]);
        }
    }
    return m;
}

// Visits every replaceable type site of a declaration: supertype arguments,
// parameter types, and return types, including nested type arguments.
template <class Fn>
void walkType(ir::TypeRef& t, const std::string& where, bool returnRoot,
              Fn&& fn) {
    fn(t, where, returnRoot);
    for (std::size_t i = 0; i < t.args.size(); ++i)
        walkType(t.args[i], where + " arg " + std::to_string(i), false, fn);
}

template <class Fn>
void walkDeclSites(ir::TypeDecl& d, Fn&& fn) {
    for (auto& s : d.supertypes)
        for (std::size_t i = 0; i < s.args.size(); ++i)
            walkType(s.args[i],
                     d.name + " super " + s.target + " arg " + std::to_string(i),
                     false, fn);
    for (auto& m : d.methods) {
        for (auto& p : m.params)
            walkType(p.type, d.name + "." + m.name + " param " + p.name, false,
                     fn);
        walkType(m.returnType, d.name + "." + m.name + " return", true, fn);
    }
}

template <class Fn>
void walkProgramSites(ir::IrProgram& p, Fn&& fn) {
    for (auto& d : p.declarations) walkDeclSites(d, fn);
}

inline void scrubOverrideRefs(ir::IrProgram& p, const std::string& owner,
                              const std::string& method) {
    for (auto& d : p.declarations)
        for (auto& m : d.methods)
            std::erase_if(m.overrides, [&](const ir::OverrideRef& r) {
                return r.decl == owner && r.method == method;
            });
}

inline void addRemoveMethodCandidates(const ir::IrProgram& p,
                                      std::vector<Candidate>& out) {
    for (std::size_t di = 0; di < p.declarations.size(); ++di)
        for (std::size_t mi = 0; mi < p.declarations[di].methods.size(); ++mi) {
            const std::string& owner = p.declarations[di].name;
            const std::string& name = p.declarations[di].methods[mi].name;
            Candidate c{"remove-method", owner + "." + name, p};
            c.program.declarations[di].methods.erase(
                c.program.declarations[di].methods.begin() +
                static_cast<std::ptrdiff_t>(mi));
            scrubOverrideRefs(c.program, owner, name);
            out.push_back(std::move(c));
        }
}

inline void addFlattenLanguageCandidates(const ir::IrProgram& p, ir::Lang pivot,
                                         std::vector<Candidate>& out) {
    for (std::size_t di = 0; di < p.declarations.size(); ++di) {
        if (p.declarations[di].lang == pivot) continue;
        Candidate c{"flatten-language",
                    p.declarations[di].name + " -> " + ir::toString(pivot), p};
        c.program.declarations[di].lang = pivot;
        out.push_back(std::move(c));
    }
}

inline void addTypeSiteCandidates(const ir::IrProgram& p, ir::TypeKind target,
                                  const std::string& pass,
                                  std::vector<Candidate>& out) {
    // Enumerate matching sites by index, then rebuild a fresh copy per edit.
    std::vector<std::pair<std::size_t, std::string>> sites;
    {
        ir::IrProgram scratch = p;
        std::size_t index = 0;
        walkProgramSites(scratch, [&](ir::TypeRef& t, const std::string& where,
                                      bool) {
            if (t.kind == target) sites.emplace_back(index, where);
            ++index;
        });
    }
    for (const auto& [siteIndex, where] : sites)
        for (const ir::TypeRef& replacement : {ir::stringType(), ir::topType()}) {
            Candidate c{pass, where + " -> " + replacement.key(), p};
            std::size_t index = 0;
            walkProgramSites(c.program,
                             [&, siteIndex = siteIndex](ir::TypeRef& t,
                                                        const std::string&, bool) {
                                 if (index++ == siteIndex) t = replacement;
                             });
            out.push_back(std::move(c));
        }
}

inline void addRemoveTypeParamCandidates(const ir::IrProgram& p,
                                         std::vector<Candidate>& out) {
    for (std::size_t di = 0; di < p.declarations.size(); ++di) {
        const ir::TypeDecl& d = p.declarations[di];
        for (std::size_t ti = 0; ti < d.typeParams.size(); ++ti) {
            const std::string& param = d.typeParams[ti].name;

            bool used = false;
            {
                ir::IrProgram scratch = p;
                walkDeclSites(scratch.declarations[di],
                              [&](ir::TypeRef& t, const std::string&, bool) {
                                  if (t.kind == ir::TypeKind::TypeParam &&
                                      t.name == param)
                                      used = true;
                              });
            }
            if (used) continue;

            Candidate c{"remove-type-param", d.name + "." + param, p};
            ir::TypeDecl& cd = c.program.declarations[di];
            cd.typeParams.erase(cd.typeParams.begin() +
                                static_cast<std::ptrdiff_t>(ti));

            // Drop the matching argument everywhere the declaration is used.
            std::function<void(ir::TypeRef&)> fixRef = [&](ir::TypeRef& t) {
                if (t.kind == ir::TypeKind::ClassType && t.name == d.name &&
                    ti < t.args.size())
                    t.args.erase(t.args.begin() + static_cast<std::ptrdiff_t>(ti));
                for (auto& a : t.args) fixRef(a);
            };
            for (auto& e : c.program.declarations) {
                for (auto& s : e.supertypes) {
                    if (s.target == d.name && ti < s.args.size())
                        s.args.erase(s.args.begin() +
                                     static_cast<std::ptrdiff_t>(ti));
                    for (auto& a : s.args) fixRef(a);
                }
                for (auto& m : e.methods) {
                    for (auto& prm : m.params) fixRef(prm.type);
                    fixRef(m.returnType);
                }
            }
            out.push_back(std::move(c));
        }
    }
}

inline void addRemoveDeclCandidates(const ir::IrProgram& p,
                                    std::vector<Candidate>& out) {
    std::set<std::string> referenced;
    {
        ir::IrProgram scratch = p;
        for (auto& d : scratch.declarations) {
            for (const auto& s : d.supertypes) referenced.insert(s.target);
            for (const auto& m : d.methods)
                for (const auto& r : m.overrides) referenced.insert(r.decl);
        }
        walkProgramSites(scratch, [&](ir::TypeRef& t, const std::string&, bool) {
            if (t.kind == ir::TypeKind::ClassType) referenced.insert(t.name);
        });
    }
    for (std::size_t di = 0; di < p.declarations.size(); ++di) {
        if (referenced.count(p.declarations[di].name)) continue;
        Candidate c{"remove-decl", p.declarations[di].name, p};
        c.program.declarations.erase(c.program.declarations.begin() +
                                     static_cast<std::ptrdiff_t>(di));
        out.push_back(std::move(c));
    }
}

inline std::vector<Candidate> enumerateCandidates(const ir::IrProgram& p,
                                                  ir::Lang pivot) {
    std::vector<Candidate> out;
    addRemoveMethodCandidates(p, out);
    addFlattenLanguageCandidates(p, pivot, out);
    addTypeSiteCandidates(p, ir::TypeKind::ClassType, "replace-custom-type", out);
    addTypeSiteCandidates(p, ir::TypeKind::TypeParam, "concretize-type-param",
                          out);
    addRemoveTypeParamCandidates(p, out);
    addRemoveDeclCandidates(p, out);
    return out;
}

inline std::vector<Candidate> reorderProbes(const ir::IrProgram& p) {
    std::vector<Candidate> out;
    for (std::size_t di = 0; di < p.declarations.size(); ++di) {
        if (p.declarations[di].supertypes.size() < 2) continue;
        Candidate c{"reorder-supertypes", p.declarations[di].name, p};
        auto& supers = c.program.declarations[di].supertypes;
        std::rotate(supers.begin(), supers.begin() + 1, supers.end());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

inline MinimizeOutcome minimizeProgram(const ir::IrProgram& input,
                                       const MinimizeOracle& oracle,
                                       const MinimizeOptions& opts = {}) {
    MinimizeOutcome out;
    out.program = input;

    auto callOracle = [&](const ir::IrProgram& p) {
        if (out.oracleCalls >= opts.maxOracleCalls)
            throw Error("minimization exceeded its oracle-call budget");
        ++out.oracleCalls;
        return oracle(p, render::renderProgram(p, opts.renderOptions));
    };

    out.baseline = callOracle(out.program);
    if (!out.baseline.finding)
        throw OracleDriftError(
            "the oracle does not flag the program given to the minimizer");

    auto matchesBaseline = [&](const OracleResult& r) {
        return r.finding && r.verdictClass == out.baseline.verdictClass &&
               r.fingerprint == out.baseline.fingerprint;
    };
    auto structurallySound = [](const ir::IrProgram& p) {
        return ir::validate(p, ir::ValidationMode::StructuralOnly).ok();
    };

    std::set<std::pair<std::string, std::string>> forkKeys;
    auto recordFork = [&](detail::Candidate&& cand, const OracleResult& res) {
        if (forkKeys.emplace(res.verdictClass, res.fingerprint).second)
            out.forks.push_back(
                {std::move(cand.program), res, cand.pass, cand.detail});
    };

    std::unordered_set<std::string> rejected;  // canonical texts already probed
    detail::Measure measure = detail::measureOf(out.program, opts.pivotLang);

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& cand : detail::enumerateCandidates(out.program, opts.pivotLang)) {
            if (!structurallySound(cand.program)) continue;
            detail::Measure candMeasure =
                detail::measureOf(cand.program, opts.pivotLang);
            if (!(candMeasure < measure)) continue;
            std::string key = ir::canonicalText(cand.program);
            if (rejected.count(key)) continue;

            OracleResult res = callOracle(cand.program);
            if (matchesBaseline(res)) {
                out.trail.push_back({cand.pass, cand.detail, true});
                out.program = std::move(cand.program);
                measure = candMeasure;
                changed = true;
                break;  // restart the sweep from the highest-priority pass
            }
            out.trail.push_back({cand.pass, cand.detail, false});
            rejected.insert(std::move(key));
            if (res.finding) recordFork(std::move(cand), res);
        }
    }

    if (opts.probeSupertypeOrder) {
        for (auto& cand : detail::reorderProbes(out.program)) {
            if (!structurallySound(cand.program)) continue;
            OracleResult res = callOracle(cand.program);
            out.trail.push_back({cand.pass, cand.detail, false});
            if (res.finding && !matchesBaseline(res))
                recordFork(std::move(cand), res);
        }
    }
    return out;
}

}  // namespace xlang::minimize
