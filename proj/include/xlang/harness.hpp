#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/fingerprint.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/process.hpp"
#include "xlang/render.hpp"

// Compile harness. A rendered bundle is staged into a work directory and fed
// through a per-language compile plan:
//
//   pure Java            javac *.java
//   Java + Kotlin        kotlinc (all sources)   then javac *.java against it
//   Java + Groovy        groovyc (all sources)   then javac *.java against it
//   Java + Scala         scalac  (all sources)   then javac *.java against it
//
// The secondary compiler sees the .java files too (they all parse Java well
// enough to build signatures); javac then re-checks the Java half against
// the produced class files. Mixing two non-Java languages is rejected.
//
// Normal testing compiles once with the first configured compiler per
// language and reports crashes. Differential testing compiles once per
// configured variant of the varied language (the secondary one, or javac
// itself for pure-Java programs) with everything else pinned, then compares
// statuses: any crash is a finding, a pass/reject split is a discrepancy,
// and any timeout makes the whole comparison inconclusive.

namespace xlang::harness {

struct CompilerSpec {
    std::string id;
    ir::Lang language;
    std::vector<std::string> invocation;  // {sources} {classpath} {outDir}
    std::string version;
    double timeoutSeconds = 60.0;
    std::map<std::string, std::string> env;
};

inline const std::vector<std::string>& defaultCrashPatterns() {
    static const std::vector<std::string> kPatterns = {
        "Exception in thread",
        "\tat [A-Za-z_$][\\w.$]*\\(",
        "internal error",
        "Internal error",
        "Internal compiler error",
        "Please file a bug",
        "FAILED ASSERTION",
        "StackOverflowError",
    };
    return kPatterns;
}

struct ToolchainsConfig {
    std::vector<CompilerSpec> compilers;
    std::vector<std::string> crashPatterns = defaultCrashPatterns();
};

inline ir::Json toJson(const ToolchainsConfig& cfg) {
    ir::Json j;
    j["schema"] = "toolchains/1";
    ir::Json comps = ir::Json::array();
    for (const auto& c : cfg.compilers) {
        ir::Json jc;
        jc["id"] = c.id;
        jc["language"] = ir::toString(c.language);
        jc["invocation"] = c.invocation;
        jc["version"] = c.version;
        jc["timeoutSeconds"] = c.timeoutSeconds;
        ir::Json env = ir::Json::object();
        for (const auto& [k, v] : c.env) env[k] = v;
        jc["env"] = std::move(env);
        comps.push_back(std::move(jc));
    }
    j["compilers"] = std::move(comps);
    j["crashPatterns"] = cfg.crashPatterns;
    return j;
}

inline ToolchainsConfig toolchainsFromJson(const ir::Json& j) {
    if (!j.is_object() || j.value("schema", "") != "toolchains/1")
        throw ConfigError("expected a toolchains/1 document");
    ToolchainsConfig cfg;
    try {
        std::set<std::string> ids;
        for (const auto& jc : j.at("compilers")) {
            CompilerSpec s;
            s.id = jc.at("id").get<std::string>();
            s.language =
                ir::detail::langFromString(jc.at("language").get<std::string>());
            for (const auto& t : jc.at("invocation"))
                s.invocation.push_back(t.get<std::string>());
            s.version = jc.value("version", std::string{});
            s.timeoutSeconds = jc.value("timeoutSeconds", 60.0);
            if (jc.contains("env"))
                for (const auto& [k, v] : jc.at("env").items())
                    s.env[k] = v.get<std::string>();
            if (s.id.empty() || s.invocation.empty())
                throw ConfigError("compiler entries need an id and an invocation");
            if (!ids.insert(s.id).second)
                throw ConfigError("duplicate compiler id: " + s.id);
            cfg.compilers.push_back(std::move(s));
        }
        if (j.contains("crashPatterns")) {
            cfg.crashPatterns.clear();
            for (const auto& p : j.at("crashPatterns"))
                cfg.crashPatterns.push_back(p.get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad toolchains config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("bad toolchains config: ") + e.what());
    }
    return cfg;
}

// Stock invocations for real toolchains; gated tests and the CLI use these
// when no config file is given.
inline ToolchainsConfig defaultToolchains() {
    ToolchainsConfig cfg;
    cfg.compilers = {
        {"javac", ir::Lang::Java,
         {"javac", "-d", "{outDir}", "-cp", "{classpath}", "{sources}"}, "", 60, {}},
        {"kotlinc", ir::Lang::Kotlin,
         {"kotlinc", "-d", "{outDir}", "-classpath", "{classpath}",
          "-Xjvm-default=all", "{sources}"}, "", 120, {}},
        {"groovyc", ir::Lang::Groovy,
         {"groovyc", "-d", "{outDir}", "-cp", "{classpath}", "{sources}"}, "", 60, {}},
        {"scalac", ir::Lang::Scala,
         {"scalac", "-d", "{outDir}", "-classpath", "{classpath}", "{sources}"},
         "", 120, {}},
    };
    return cfg;
}

enum class CompileStatus { Pass, Reject, Crash, Timeout };

inline const char* toString(CompileStatus s) {
    switch (s) {
        case CompileStatus::Pass: return "pass";
        case CompileStatus::Reject: return "reject";
        case CompileStatus::Crash: return "crash";
        case CompileStatus::Timeout: return "timeout";
    }
    return "?";
}

struct CompileStepResult {
    std::string compilerId;
    CompileStatus status = CompileStatus::Pass;
    int exitCode = 0;
    std::string output;
    std::string diagnosticFingerprint = "-";
};

struct CompileOutcome {
    CompileStatus status = CompileStatus::Pass;
    std::vector<CompileStepResult> steps;
};

enum class Verdict { Ok, Discrepancy, CrashFound, Inconclusive };

inline const char* toString(Verdict v) {
    switch (v) {
        case Verdict::Ok: return "ok";
        case Verdict::Discrepancy: return "discrepancy";
        case Verdict::CrashFound: return "crash";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct VariantOutcome {
    std::string variantId;
    CompileOutcome outcome;
};

struct TestResult {
    Verdict verdict = Verdict::Ok;
    std::vector<VariantOutcome> variants;
    std::string fingerprint;  // set for crash/discrepancy verdicts
};

namespace detail {

inline CompileStatus classifyOutput(const proc::RunResult& run,
                                    const std::vector<std::string>& patterns) {
    if (run.timedOut) return CompileStatus::Timeout;
    for (const auto& p : patterns)
        if (std::regex_search(run.output, std::regex(p)))
            return CompileStatus::Crash;
    return run.exitCode == 0 ? CompileStatus::Pass : CompileStatus::Reject;
}

inline std::string envOverrideName(const std::string& id) {
    std::string name = "XLANGFUZZ_COMPILER_";
    for (char c : id)
        name += std::isalnum(static_cast<unsigned char>(c))
                    ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                    : '_';
    return name;
}

inline std::vector<std::string> buildArgv(const CompilerSpec& spec,
                                          const std::vector<std::string>& sources,
                                          const std::string& classpath,
                                          const std::string& outDir) {
    std::vector<std::string> argv;
    for (const auto& token : spec.invocation) {
        if (token == "{sources}") {
            argv.insert(argv.end(), sources.begin(), sources.end());
            continue;
        }
        std::string t = token;
        auto substitute = [&t](const std::string& key, const std::string& value) {
            for (std::size_t pos; (pos = t.find(key)) != std::string::npos;)
                t.replace(pos, key.size(), value);
        };
        substitute("{outDir}", outDir);
        substitute("{classpath}", classpath.empty() ? "." : classpath);
        argv.push_back(std::move(t));
    }
    if (!argv.empty())
        if (const char* redirect = std::getenv(envOverrideName(spec.id).c_str()))
            argv[0] = redirect;
    return argv;
}

inline CompileStepResult runStep(const CompilerSpec& spec,
                                 const std::vector<std::string>& sources,
                                 const std::string& classpath,
                                 const std::filesystem::path& workDir,
                                 const std::string& outDir,
                                 const std::vector<std::string>& crashPatterns) {
    std::filesystem::create_directories(workDir / outDir);
    auto argv = buildArgv(spec, sources, classpath, outDir);
    proc::RunResult run =
        proc::runProcess(argv, spec.env, spec.timeoutSeconds, workDir);

    CompileStepResult step;
    step.compilerId = spec.id;
    step.exitCode = run.exitCode;
    step.output = run.output;
    step.status = classifyOutput(run, crashPatterns);
    if (step.status == CompileStatus::Reject ||
        step.status == CompileStatus::Crash)
        step.diagnosticFingerprint = fp::fingerprintDiagnostics(run.output);
    return step;
}

}  // namespace detail

inline std::set<ir::Lang> bundleLanguages(const render::SourceBundle& bundle) {
    std::set<ir::Lang> langs;
    for (const auto& f : bundle.files) langs.insert(f.lang);
    return langs;
}

inline std::vector<const CompilerSpec*> compilersFor(const ToolchainsConfig& cfg,
                                                     ir::Lang lang) {
    std::vector<const CompilerSpec*> out;
    for (const auto& c : cfg.compilers)
        if (c.language == lang) out.push_back(&c);
    return out;
}

// language -> compiler chosen for this particular compile
using CompilerAssignment = std::map<ir::Lang, const CompilerSpec*>;

inline CompileOutcome compileBundle(const render::SourceBundle& bundle,
                                    const ToolchainsConfig& cfg,
                                    const std::filesystem::path& workDir,
                                    const CompilerAssignment& assignment) {
    render::writeBundle(bundle, workDir);

    std::vector<std::string> allSources, javaSources;
    std::set<ir::Lang> langs;
    for (const auto& f : bundle.files) {
        allSources.push_back(f.path);
        if (f.lang == ir::Lang::Java) javaSources.push_back(f.path);
        langs.insert(f.lang);
    }

    CompileOutcome outcome;
    if (allSources.empty()) return outcome;

    std::set<ir::Lang> secondary = langs;
    secondary.erase(ir::Lang::Java);
    if (secondary.size() > 1) {
        std::string names;
        for (ir::Lang l : secondary) names += std::string(" ") + ir::toString(l);
        throw UnsupportedLanguageMixError(
            "no compile plan for a program mixing" + names);
    }

    auto chosen = [&](ir::Lang lang) -> const CompilerSpec& {
        auto it = assignment.find(lang);
        if (it == assignment.end() || !it->second)
            throw ToolchainUnavailableError(std::string("no compiler assigned for ") +
                                            ir::toString(lang));
        return *it->second;
    };

    auto append = [&](const CompilerSpec& spec,
                      const std::vector<std::string>& sources,
                      const std::string& classpath) {
        outcome.steps.push_back(detail::runStep(spec, sources, classpath, workDir,
                                                "out/" + spec.id,
                                                cfg.crashPatterns));
        outcome.status = outcome.steps.back().status;
        return outcome.status == CompileStatus::Pass;
    };

    if (secondary.empty()) {
        append(chosen(ir::Lang::Java), javaSources, "");
        return outcome;
    }

    ir::Lang lang = *secondary.begin();
    const CompilerSpec& secondarySpec = chosen(lang);
    if (!append(secondarySpec, allSources, "")) return outcome;
    if (!javaSources.empty())
        append(chosen(ir::Lang::Java), javaSources, "out/" + secondarySpec.id);
    return outcome;
}

namespace detail {

// One line per distinct (compiler, status, diagnostics) triple, sorted, so
// the same failure shape always hashes identically no matter which variant
// or step produced it.
inline std::string resultFingerprint(const std::vector<VariantOutcome>& variants) {
    std::set<std::string> triples;
    for (const auto& v : variants)
        for (const auto& s : v.outcome.steps)
            triples.insert(s.compilerId + "=" + toString(s.status) + ":" +
                           s.diagnosticFingerprint);
    std::string joined;
    for (const auto& t : triples) joined += t + ";";
    return fp::toHex16(fp::fnv1a64(joined));
}

inline Verdict combinedVerdict(const std::vector<VariantOutcome>& variants) {
    bool anyTimeout = false, anyCrash = false, anyPass = false, anyReject = false;
    for (const auto& v : variants) {
        switch (v.outcome.status) {
            case CompileStatus::Timeout: anyTimeout = true; break;
            case CompileStatus::Crash: anyCrash = true; break;
            case CompileStatus::Pass: anyPass = true; break;
            case CompileStatus::Reject: anyReject = true; break;
        }
    }
    if (anyTimeout) return Verdict::Inconclusive;
    if (anyCrash) return Verdict::CrashFound;
    if (anyPass && anyReject) return Verdict::Discrepancy;
    return Verdict::Ok;
}

}  // namespace detail

// Compile once, with the first configured compiler per language. Only a
// compiler crash is a finding; a reject is recorded but not reported (a
// cross-language reject may be legitimate strictness, not a bug).
inline TestResult normalTest(const render::SourceBundle& bundle,
                             const ToolchainsConfig& cfg,
                             const std::filesystem::path& workDir) {
    CompilerAssignment assignment;
    for (ir::Lang lang : bundleLanguages(bundle)) {
        auto specs = compilersFor(cfg, lang);
        if (specs.empty())
            throw ToolchainUnavailableError(std::string("no compiler configured for ") +
                                            ir::toString(lang));
        assignment[lang] = specs.front();
    }

    TestResult result;
    result.variants.push_back(
        {"default", compileBundle(bundle, cfg, workDir / "default", assignment)});
    switch (result.variants[0].outcome.status) {
        case CompileStatus::Timeout: result.verdict = Verdict::Inconclusive; break;
        case CompileStatus::Crash: result.verdict = Verdict::CrashFound; break;
        default: result.verdict = Verdict::Ok; break;
    }
    if (result.verdict == Verdict::CrashFound)
        result.fingerprint = detail::resultFingerprint(result.variants);
    return result;
}

// Compile once per variant of the varied language; everything else pinned to
// the first configured compiler of its language.
inline TestResult differentialTest(const render::SourceBundle& bundle,
                                   const ToolchainsConfig& cfg,
                                   const std::filesystem::path& workDir) {
    std::set<ir::Lang> langs = bundleLanguages(bundle);
    std::set<ir::Lang> secondary = langs;
    secondary.erase(ir::Lang::Java);
    if (secondary.size() > 1)
        throw UnsupportedLanguageMixError(
            "differential testing needs at most one non-Java language");

    TestResult result;
    if (langs.empty()) return result;

    ir::Lang varied = secondary.empty() ? ir::Lang::Java : *secondary.begin();
    auto variants = compilersFor(cfg, varied);
    if (variants.empty())
        throw ToolchainUnavailableError(std::string("no compiler configured for ") +
                                        ir::toString(varied));

    const CompilerSpec* pinnedJavac = nullptr;
    if (langs.count(ir::Lang::Java) && varied != ir::Lang::Java) {
        auto javacs = compilersFor(cfg, ir::Lang::Java);
        if (javacs.empty())
            throw ToolchainUnavailableError("no compiler configured for java");
        pinnedJavac = javacs.front();
    }

    for (const CompilerSpec* variant : variants) {
        CompilerAssignment assignment;
        assignment[varied] = variant;
        if (pinnedJavac) assignment[ir::Lang::Java] = pinnedJavac;
        result.variants.push_back(
            {variant->id,
             compileBundle(bundle, cfg, workDir / variant->id, assignment)});
    }

    result.verdict = detail::combinedVerdict(result.variants);
    if (result.verdict == Verdict::CrashFound ||
        result.verdict == Verdict::Discrepancy)
        result.fingerprint = detail::resultFingerprint(result.variants);
    return result;
}

}  // namespace xlang::harness
