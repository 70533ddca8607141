#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "xlang/errors.hpp"
#include "xlang/fingerprint.hpp"
#include "xlang/generator.hpp"
#include "xlang/harness.hpp"
#include "xlang/metrics.hpp"
#include "xlang/minimize.hpp"
#include "xlang/mutate.hpp"
#include "xlang/render.hpp"

// Fuzzing campaigns. One run generates a corpus of seed programs, puts each
// through a normal compile (crashes are findings), derives mutants and puts
// those through differential compiles (crashes and accept/reject splits are
// findings), deduplicates findings by fingerprint, and minimizes the first
// program that exhibits each one. Forks discovered while minimizing are fed
// back in as findings of their own, up to a configurable depth.
//
// Everything is derived from the campaign seed — run ids, per-program seeds,
// per-mutant seeds — and the outputs carry no timestamps, so the same seed
// and toolchains produce byte-identical corpora and summaries.
//
// Run layout:
//   runs/<runId>/config.json            the configuration that was used
//   runs/<runId>/corpus/p00007.json     generated program 7
//   runs/<runId>/corpus/p00007.m2.json  its third mutant
//   runs/<runId>/findings/<fp>/program.json    first program with finding <fp>
//   runs/<runId>/findings/<fp>/minimized.json  its minimized form
//   runs/<runId>/work/...               compiler scratch space
//   runs/<runId>/summary.json           machine-readable results

namespace xlang::campaign {

namespace fs = std::filesystem;

struct CampaignConfig {
    std::uint64_t seed = 1;
    std::size_t programCount = 20;
    std::size_t mutantsPerProgram = 4;
    gen::GenConfig generator{};
    mut::MutateOptions mutation{};
    render::RenderOptions rendering{};
    bool minimizeFindings = true;
    std::size_t forkDepthLimit = 2;
};

inline ir::Json toJson(const CampaignConfig& cfg) {
    ir::Json j;
    j["schema"] = "campaign/1";
    j["seed"] = cfg.seed;
    j["programCount"] = cfg.programCount;
    j["mutantsPerProgram"] = cfg.mutantsPerProgram;
    j["generator"] = gen::toJson(cfg.generator);
    ir::Json langs = ir::Json::array();
    for (ir::Lang l : cfg.mutation.languages) langs.push_back(ir::toString(l));
    ir::Json kinds = ir::Json::array();
    for (mut::MutatorKind k : cfg.mutation.enabled)
        kinds.push_back(mut::toString(k));
    j["mutation"] = {{"languages", std::move(langs)},
                     {"mutators", std::move(kinds)}};
    j["rendering"] = {{"kotlinNullableRefs", cfg.rendering.kotlinNullableRefs}};
    j["minimizeFindings"] = cfg.minimizeFindings;
    j["forkDepthLimit"] = cfg.forkDepthLimit;
    return j;
}

inline CampaignConfig campaignConfigFromJson(const ir::Json& j) {
    if (!j.is_object() || j.value("schema", "") != "campaign/1")
        throw ConfigError("expected a campaign/1 document");
    CampaignConfig cfg;
    try {
        cfg.seed = j.value("seed", cfg.seed);
        cfg.programCount = j.value("programCount", cfg.programCount);
        cfg.mutantsPerProgram = j.value("mutantsPerProgram", cfg.mutantsPerProgram);
        if (j.contains("generator"))
            cfg.generator = gen::genConfigFromJson(j.at("generator"));
        if (j.contains("mutation")) {
            const ir::Json& m = j.at("mutation");
            if (m.contains("languages")) {
                cfg.mutation.languages.clear();
                for (const auto& l : m.at("languages"))
                    cfg.mutation.languages.push_back(
                        ir::detail::langFromString(l.get<std::string>()));
            }
            if (m.contains("mutators")) {
                cfg.mutation.enabled.clear();
                for (const auto& k : m.at("mutators"))
                    cfg.mutation.enabled.push_back(
                        mut::mutatorKindFromString(k.get<std::string>()));
            }
        }
        if (j.contains("rendering"))
            cfg.rendering.kotlinNullableRefs = j.at("rendering").value(
                "kotlinNullableRefs", cfg.rendering.kotlinNullableRefs);
        cfg.minimizeFindings = j.value("minimizeFindings", cfg.minimizeFindings);
        cfg.forkDepthLimit = j.value("forkDepthLimit", cfg.forkDepthLimit);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad campaign config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("bad campaign config: ") + e.what());
    }
    if (cfg.mutation.languages.empty())
        throw ConfigError("mutation languages must not be empty");
    return cfg;
}

struct FindingRecord {
    std::string fingerprint;
    std::string verdictClass;  // "crash" or "discrepancy"
    std::string testKind;      // "normal" or "differential"
    std::string source;        // corpus id of the first program showing it
    std::string mutator;       // mutator attribution; "none" for raw programs
    std::size_t depth = 0;     // 0 = found directly, >0 = minimization fork
    std::size_t duplicates = 0;
    bool minimized = false;
    std::size_t minimizedDecls = 0;
};

struct CampaignResult {
    std::string runId;
    fs::path runDir;
    std::vector<FindingRecord> findings;
    ir::Json summary;
};

// Corpus file stem for the i-th generated program ("p00007").
inline std::string programId(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%05zu", i);
    return buf;
}

namespace detail {

inline std::string twoDecimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline void writeTextFile(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
}

class Runner {
public:
    Runner(const CampaignConfig& cfg, const harness::ToolchainsConfig& toolchains,
           const fs::path& runDir, std::string runId)
        : cfg_(cfg), toolchains_(toolchains), runDir_(runDir),
          runId_(std::move(runId)) {}

    CampaignResult run() {
        for (ir::Lang lang : cfg_.generator.languages)
            if (harness::compilersFor(toolchains_, lang).empty())
                throw ConfigError(std::string("toolchains define no compiler for "
                                              "generator language ") +
                                  ir::toString(lang));

        fs::create_directories(runDir_ / "corpus");
        fs::create_directories(runDir_ / "work");
        writeTextFile(runDir_ / "config.json",
                      ir::canonicalText(toJson(cfg_)));

        for (std::size_t i = 0; i < cfg_.programCount; ++i) runProgram(i);

        CampaignResult result;
        result.runId = runId_;
        result.runDir = runDir_;
        result.findings = findings_;
        result.summary = buildSummary();
        writeTextFile(runDir_ / "summary.json",
                      ir::canonicalText(result.summary));
        return result;
    }

private:
    void runProgram(std::size_t i) {
        const std::uint64_t progSeed = Rng::deriveSeed(cfg_.seed, i);
        const std::string id = programId(i);
        ir::IrProgram prog = gen::generateProgram(progSeed, cfg_.generator);
        writeTextFile(runDir_ / "corpus" / (id + ".json"),
                      ir::canonicalText(prog));

        depthSum_ += ir::inheritanceDepth(prog);
        widthSum_ += ir::inheritanceWidth(prog);
        crossLanguage_ += ir::isCrossLanguage(prog) ? 1 : 0;
        genericsRelated_ += ir::isGenericsRelated(prog) ? 1 : 0;

        render::SourceBundle bundle = render::renderProgram(prog, cfg_.rendering);
        ++normalTests_;
        harness::TestResult normal =
            harness::normalTest(bundle, toolchains_, runDir_ / "work" / id / "normal");
        tally(normal.verdict);
        if (normal.verdict == harness::Verdict::CrashFound)
            recordFinding(normal.fingerprint, harness::toString(normal.verdict),
                          "normal", id, "none", 0, prog);

        for (std::size_t j = 0; j < cfg_.mutantsPerProgram; ++j) runMutant(prog, progSeed, id, j);
    }

    void runMutant(const ir::IrProgram& prog, std::uint64_t progSeed,
                   const std::string& id, std::size_t j) {
        ++mutantsAttempted_;
        const std::uint64_t mutantSeed = Rng::deriveSeed(progSeed, j + 1);
        mut::MutationResult mutant;
        try {
            mutant = mut::applyAnyMutator(prog, mutantSeed, cfg_.mutation);
        } catch (const NoMutationPossibleError&) {
            ++mutantsSkipped_;
            return;
        }
        const std::string mid = id + ".m" + std::to_string(j);
        writeTextFile(runDir_ / "corpus" / (mid + ".json"),
                      ir::canonicalText(mutant.program));
        ++mutatorUsage_[mutant.record.mutator];

        render::SourceBundle bundle =
            render::renderProgram(mutant.program, cfg_.rendering);
        ++differentialTests_;
        try {
            harness::TestResult diff = harness::differentialTest(
                bundle, toolchains_, runDir_ / "work" / mid);
            tally(diff.verdict);
            if (diff.verdict == harness::Verdict::CrashFound ||
                diff.verdict == harness::Verdict::Discrepancy)
                recordFinding(diff.fingerprint, harness::toString(diff.verdict),
                              "differential", mid, mutant.record.mutator, 0,
                              mutant.program);
        } catch (const UnsupportedLanguageMixError&) {
            ++unsupportedMixes_;
        } catch (const ToolchainUnavailableError&) {
            ++unsupportedMixes_;
        }
    }

    minimize::MinimizeOracle makeOracle(const std::string& testKind) {
        return [this, testKind](const ir::IrProgram&,
                                const render::SourceBundle& bundle) {
            fs::path scratch = runDir_ / "work" / "minimize" /
                               std::to_string(oracleScratch_++);
            try {
                harness::TestResult r =
                    testKind == "normal"
                        ? harness::normalTest(bundle, toolchains_, scratch)
                        : harness::differentialTest(bundle, toolchains_, scratch);
                bool found = r.verdict == harness::Verdict::CrashFound ||
                             r.verdict == harness::Verdict::Discrepancy;
                return minimize::OracleResult{found, harness::toString(r.verdict),
                                              r.fingerprint};
            } catch (const UnsupportedLanguageMixError&) {
                return minimize::OracleResult{};
            } catch (const ToolchainUnavailableError&) {
                return minimize::OracleResult{};
            }
        };
    }

    void recordFinding(const std::string& fingerprint,
                       const std::string& verdictClass,
                       const std::string& testKind, const std::string& source,
                       const std::string& mutator, std::size_t depth,
                       const ir::IrProgram& prog) {
        auto it = findingIndex_.find(fingerprint);
        if (it != findingIndex_.end()) {
            ++findings_[it->second].duplicates;
            return;
        }

        FindingRecord rec{fingerprint, verdictClass, testKind,
                          source,      mutator,      depth};
        const fs::path dir = runDir_ / "findings" / fingerprint;
        writeTextFile(dir / "program.json", ir::canonicalText(prog));

        const std::size_t index = findings_.size();
        findingIndex_[fingerprint] = index;
        findings_.push_back(rec);

        if (!cfg_.minimizeFindings) return;

        std::vector<minimize::MinimizeFork> forks;
        try {
            minimize::MinimizeOptions opts;
            opts.renderOptions = cfg_.rendering;
            minimize::MinimizeOutcome out =
                minimize::minimizeProgram(prog, makeOracle(testKind), opts);
            writeTextFile(dir / "minimized.json", ir::canonicalText(out.program));
            findings_[index].minimized = true;
            findings_[index].minimizedDecls = out.program.declarations.size();
            minimizeOracleCalls_ += out.oracleCalls;
            forks = std::move(out.forks);
        } catch (const OracleDriftError&) {
            ++unreproducible_;
        }

        for (const minimize::MinimizeFork& fork : forks) {
            if (depth + 1 > cfg_.forkDepthLimit) {
                ++forksSkippedByDepth_;
                continue;
            }
            recordFinding(fork.result.fingerprint, fork.result.verdictClass,
                          testKind, source + ".fork", mutator, depth + 1,
                          fork.program);
        }
    }

    void tally(harness::Verdict v) { ++verdictCounts_[harness::toString(v)]; }

    ir::Json buildSummary() const {
        ir::Json s;
        s["schema"] = "summary/1";
        s["runId"] = runId_;
        s["seed"] = cfg_.seed;
        s["programs"] = cfg_.programCount;

        const double n = cfg_.programCount ? double(cfg_.programCount) : 1.0;
        s["corpus"] = {{"avgDepth", twoDecimals(depthSum_ / n)},
                       {"avgWidth", twoDecimals(widthSum_ / n)},
                       {"crossLanguage", crossLanguage_},
                       {"genericsRelated", genericsRelated_}};

        s["mutants"] = {
            {"attempted", mutantsAttempted_},
            {"produced", mutantsAttempted_ - mutantsSkipped_},
            {"skipped", mutantsSkipped_},
            {"unsupportedMixes", unsupportedMixes_}};
        ir::Json usage = ir::Json::object();
        for (const auto& [name, count] : mutatorUsage_) usage[name] = count;
        s["mutatorUsage"] = std::move(usage);

        s["tests"] = {{"normal", normalTests_},
                      {"differential", differentialTests_}};
        ir::Json verdicts = ir::Json::object();
        for (const char* v : {"ok", "discrepancy", "crash", "inconclusive"}) {
            auto it = verdictCounts_.find(v);
            verdicts[v] = it == verdictCounts_.end() ? 0 : it->second;
        }
        s["verdicts"] = std::move(verdicts);

        std::map<std::string, const FindingRecord*> byFingerprint;
        for (const auto& f : findings_) byFingerprint[f.fingerprint] = &f;
        ir::Json list = ir::Json::array();
        std::size_t duplicateTotal = 0;
        for (const auto& [fp, f] : byFingerprint) {
            duplicateTotal += f->duplicates;
            ir::Json entry;
            entry["fingerprint"] = f->fingerprint;
            entry["verdict"] = f->verdictClass;
            entry["testKind"] = f->testKind;
            entry["source"] = f->source;
            entry["mutator"] = f->mutator;
            entry["depth"] = f->depth;
            entry["duplicates"] = f->duplicates;
            entry["minimized"] = f->minimized;
            entry["minimizedDecls"] = f->minimizedDecls;
            entry["files"] = {
                {"program", "findings/" + fp + "/program.json"},
                {"minimized",
                 f->minimized ? "findings/" + fp + "/minimized.json" : ""}};
            list.push_back(std::move(entry));
        }
        s["findings"] = std::move(list);
        s["findingCount"] = findings_.size();
        s["duplicateCount"] = duplicateTotal;
        s["forksSkippedByDepth"] = forksSkippedByDepth_;
        s["minimization"] = {{"oracleCalls", minimizeOracleCalls_},
                             {"unreproducible", unreproducible_}};
        return s;
    }

    CampaignConfig cfg_;
    harness::ToolchainsConfig toolchains_;
    fs::path runDir_;
    std::string runId_;

    std::vector<FindingRecord> findings_;
    std::map<std::string, std::size_t> findingIndex_;
    std::map<std::string, std::size_t> verdictCounts_;
    std::map<std::string, std::size_t> mutatorUsage_;
    std::size_t normalTests_ = 0, differentialTests_ = 0;
    std::size_t mutantsAttempted_ = 0, mutantsSkipped_ = 0, unsupportedMixes_ = 0;
    std::size_t minimizeOracleCalls_ = 0, unreproducible_ = 0;
    std::size_t forksSkippedByDepth_ = 0, oracleScratch_ = 0;
    double depthSum_ = 0, widthSum_ = 0;
    std::size_t crossLanguage_ = 0, genericsRelated_ = 0;
};

}  // namespace detail

inline std::string runIdFor(std::uint64_t seed) {
    return "run-" + fp::toHex16(seed);
}

inline CampaignResult runCampaign(const CampaignConfig& cfg,
                                  const harness::ToolchainsConfig& toolchains,
                                  const fs::path& outputRoot) {
    gen::validateConfig(cfg.generator);
    const std::string runId = runIdFor(cfg.seed);
    detail::Runner runner(cfg, toolchains, outputRoot / runId, runId);
    return runner.run();
}

// ------------------------------------------------------------- reporting ----

struct ReportResult {
    ir::Json json;
    std::string markdown;
};

inline ReportResult buildReport(const fs::path& runDir) {
    std::ifstream in(runDir / "summary.json", std::ios::binary);
    if (!in) throw ConfigError("no summary.json under " + runDir.string());
    ir::Json summary;
    try {
        summary = ir::Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("unreadable summary.json: ") + e.what());
    }
    if (summary.value("schema", "") != "summary/1")
        throw ConfigError("summary.json is not a summary/1 document");

    // Recompute corpus stats from the stored programs (generated ones only),
    // so the report stands on the artifacts rather than trusting the summary.
    std::vector<fs::path> corpusFiles;
    const std::regex generated(R"(p\d{5}\.json)");
    if (fs::exists(runDir / "corpus"))
        for (const auto& entry : fs::directory_iterator(runDir / "corpus"))
            if (std::regex_match(entry.path().filename().string(), generated))
                corpusFiles.push_back(entry.path());
    std::sort(corpusFiles.begin(), corpusFiles.end());

    double depthSum = 0, widthSum = 0;
    std::size_t cross = 0, generics = 0;
    for (const auto& path : corpusFiles) {
        std::ifstream pin(path, std::ios::binary);
        ir::IrProgram prog = ir::programFromJson(ir::Json::parse(pin));
        depthSum += ir::inheritanceDepth(prog);
        widthSum += ir::inheritanceWidth(prog);
        cross += ir::isCrossLanguage(prog) ? 1 : 0;
        generics += ir::isGenericsRelated(prog) ? 1 : 0;
    }
    const double n = corpusFiles.empty() ? 1.0 : double(corpusFiles.size());

    std::map<std::string, std::size_t> findingsByMutator;
    std::map<std::string, std::size_t> findingsByVerdict;
    for (const auto& f : summary.at("findings")) {
        ++findingsByMutator[f.at("mutator").get<std::string>()];
        ++findingsByVerdict[f.at("verdict").get<std::string>()];
    }

    ReportResult out;
    out.json["schema"] = "report/1";
    out.json["runId"] = summary.at("runId");
    out.json["seed"] = summary.at("seed");
    out.json["programs"] = corpusFiles.size();
    out.json["corpus"] = {{"avgDepth", detail::twoDecimals(depthSum / n)},
                          {"avgWidth", detail::twoDecimals(widthSum / n)},
                          {"crossLanguage", cross},
                          {"genericsRelated", generics}};
    out.json["tests"] = summary.at("tests");
    out.json["verdicts"] = summary.at("verdicts");
    out.json["mutatorUsage"] = summary.at("mutatorUsage");
    ir::Json attribution = ir::Json::object();
    for (const auto& [name, count] : findingsByMutator) attribution[name] = count;
    out.json["findingsByMutator"] = std::move(attribution);
    ir::Json byVerdict = ir::Json::object();
    for (const auto& [name, count] : findingsByVerdict) byVerdict[name] = count;
    out.json["findingsByVerdict"] = std::move(byVerdict);
    out.json["findingCount"] = summary.at("findingCount");
    out.json["duplicateCount"] = summary.at("duplicateCount");
    out.json["findings"] = summary.at("findings");

    // ---- markdown ----
    std::string md;
    const auto& corpus = out.json.at("corpus");
    md += "# Campaign report: " + summary.at("runId").get<std::string>() + "\n\n";
    md += "- seed: " + std::to_string(summary.at("seed").get<std::uint64_t>()) +
          "\n";
    md += "- programs: " + std::to_string(corpusFiles.size()) +
          " (avg inheritance depth " +
          corpus.at("avgDepth").get<std::string>() + ", avg width " +
          corpus.at("avgWidth").get<std::string>() + ")\n";
    md += "- cross-language programs: " + std::to_string(cross) + "\n";
    md += "- generics-related programs: " + std::to_string(generics) + "\n";
    const auto& mutants = summary.at("mutants");
    md += "- mutants: " + mutants.at("produced").dump() + " produced of " +
          mutants.at("attempted").dump() + " attempted\n";
    const auto& tests = summary.at("tests");
    md += "- tests: " + tests.at("normal").dump() + " normal, " +
          tests.at("differential").dump() + " differential\n";
    md += "- findings: " + summary.at("findingCount").dump() + " unique, " +
          summary.at("duplicateCount").dump() + " duplicates suppressed\n\n";

    md += "## Verdicts\n\n| verdict | count |\n| --- | --- |\n";
    for (const auto& [name, count] : summary.at("verdicts").items())
        md += "| " + name + " | " + count.dump() + " |\n";

    md += "\n## Findings\n\n";
    if (summary.at("findings").empty()) {
        md += "No findings.\n";
    } else {
        md += "| fingerprint | verdict | test | source | mutator | depth | "
              "duplicates | minimized decls |\n";
        md += "| --- | --- | --- | --- | --- | --- | --- | --- |\n";
        for (const auto& f : summary.at("findings")) {
            md += "| " + f.at("fingerprint").get<std::string>() + " | " +
                  f.at("verdict").get<std::string>() + " | " +
                  f.at("testKind").get<std::string>() + " | " +
                  f.at("source").get<std::string>() + " | " +
                  f.at("mutator").get<std::string>() + " | " +
                  f.at("depth").dump() + " | " + f.at("duplicates").dump() +
                  " | " +
                  (f.at("minimized").get<bool>() ? f.at("minimizedDecls").dump()
                                                 : std::string("-")) +
                  " |\n";
        }
    }

    md += "\n## Mutators\n\n| mutator | mutants | findings |\n| --- | --- | --- |\n";
    std::set<std::string> mutatorNames;
    for (const auto& [name, count] : summary.at("mutatorUsage").items())
        mutatorNames.insert(name);
    for (const auto& [name, count] : findingsByMutator) mutatorNames.insert(name);
    for (const auto& name : mutatorNames) {
        const auto& usage = summary.at("mutatorUsage");
        std::string used = usage.contains(name) ? usage.at(name).dump() : "0";
        std::size_t found =
            findingsByMutator.count(name) ? findingsByMutator.at(name) : 0;
        md += "| " + name + " | " + used + " | " + std::to_string(found) + " |\n";
    }

    out.markdown = std::move(md);
    return out;
}

inline void writeReport(const fs::path& runDir, const fs::path& outDir) {
    ReportResult report = buildReport(runDir);
    detail::writeTextFile(outDir / "report.json",
                          ir::canonicalText(report.json));
    detail::writeTextFile(outDir / "report.md", report.markdown);
}

}  // namespace xlang::campaign
