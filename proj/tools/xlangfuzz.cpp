// Command-line front end: generate programs, mutate them, compile-test them
// against configured toolchains, minimize findings, run whole campaigns, and
// render campaign reports.
//
// Exit codes: 0 no findings, 10 findings present, 2 configuration/usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xlang/campaign.hpp"
#include "xlang/generator.hpp"
#include "xlang/harness.hpp"
#include "xlang/minimize.hpp"
#include "xlang/mutate.hpp"
#include "xlang/render.hpp"

namespace fs = std::filesystem;
using namespace xlang;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 10;
constexpr int kExitConfig = 2;

std::string readFile(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << content;
}

ir::IrProgram loadProgram(const fs::path& p) {
    return ir::programFromText(readFile(p));
}

ir::Json parseJsonFile(const fs::path& p) {
    try {
        return ir::Json::parse(readFile(p));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

harness::ToolchainsConfig loadToolchains(const std::string& path) {
    if (path.empty()) return harness::defaultToolchains();
    return harness::toolchainsFromJson(parseJsonFile(path));
}

std::vector<ir::Lang> parseLanguageList(const std::string& csv) {
    std::vector<ir::Lang> langs;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) langs.push_back(ir::detail::langFromString(item));
    if (langs.empty()) throw ConfigError("empty language list");
    return langs;
}

void emitProgram(const ir::IrProgram& prog, const std::string& outPath) {
    if (outPath.empty())
        std::cout << ir::canonicalText(prog);
    else
        writeFile(outPath, ir::canonicalText(prog));
}

ir::Json testResultJson(const harness::TestResult& result) {
    ir::Json j;
    j["verdict"] = harness::toString(result.verdict);
    j["fingerprint"] = result.fingerprint;
    ir::Json variants = ir::Json::array();
    for (const auto& v : result.variants) {
        ir::Json vj;
        vj["variant"] = v.variantId;
        vj["status"] = harness::toString(v.outcome.status);
        ir::Json steps = ir::Json::array();
        for (const auto& s : v.outcome.steps)
            steps.push_back({{"compiler", s.compilerId},
                             {"status", harness::toString(s.status)},
                             {"exitCode", s.exitCode},
                             {"diagnosticFingerprint", s.diagnosticFingerprint}});
        vj["steps"] = std::move(steps);
        variants.push_back(std::move(vj));
    }
    j["variants"] = std::move(variants);
    return j;
}

// ----------------------------------------------------------- subcommands ----

struct GenerateArgs {
    std::uint64_t seed = 1;
    std::size_t count = 1;
    std::string configPath, outPath, outDir, languages;
};

int runGenerate(const GenerateArgs& a) {
    gen::GenConfig cfg;
    if (!a.configPath.empty())
        cfg = gen::genConfigFromJson(parseJsonFile(a.configPath));
    if (!a.languages.empty()) {
        cfg.languages = parseLanguageList(a.languages);
        gen::validateConfig(cfg);
    }
    if (a.count == 1 && a.outDir.empty()) {
        emitProgram(gen::generateProgram(a.seed, cfg), a.outPath);
        return kExitClean;
    }
    if (a.outDir.empty())
        throw ConfigError("--count needs --out-dir to write the corpus into");
    for (std::size_t i = 0; i < a.count; ++i) {
        ir::IrProgram prog =
            gen::generateProgram(Rng::deriveSeed(a.seed, i), cfg);
        writeFile(fs::path(a.outDir) / (campaign::programId(i) + ".json"),
                  ir::canonicalText(prog));
    }
    std::cout << "wrote " << a.count << " programs to " << a.outDir << "\n";
    return kExitClean;
}

struct MutateArgs {
    std::uint64_t seed = 1;
    std::string inPath, outPath, recordPath, mutator, languages;
};

int runMutate(const MutateArgs& a) {
    ir::IrProgram prog = loadProgram(a.inPath);
    mut::MutateOptions opts;
    if (!a.languages.empty()) opts.languages = parseLanguageList(a.languages);
    mut::MutationResult result =
        a.mutator.empty()
            ? mut::applyAnyMutator(prog, a.seed, opts)
            : mut::applyMutator(mut::mutatorKindFromString(a.mutator),
                                   prog, a.seed, opts);
    emitProgram(result.program, a.outPath);
    if (!a.recordPath.empty())
        writeFile(a.recordPath, ir::canonicalText(ir::toJson(result.record)));
    return kExitClean;
}

struct TestArgs {
    std::string inPath, workDir = "work", toolchainsPath;
    bool differential = false;
    bool kotlinNullable = true;
};

harness::TestResult runHarnessTest(const TestArgs& a) {
    ir::IrProgram prog = loadProgram(a.inPath);
    render::RenderOptions ropts;
    ropts.kotlinNullableRefs = a.kotlinNullable;
    render::SourceBundle bundle = render::renderProgram(prog, ropts);
    harness::ToolchainsConfig toolchains = loadToolchains(a.toolchainsPath);
    return a.differential
               ? harness::differentialTest(bundle, toolchains, a.workDir)
               : harness::normalTest(bundle, toolchains, a.workDir);
}

int runTest(const TestArgs& a) {
    harness::TestResult result = runHarnessTest(a);
    std::cout << ir::canonicalText(testResultJson(result));
    bool finding = result.verdict == harness::Verdict::CrashFound ||
                   result.verdict == harness::Verdict::Discrepancy;
    return finding ? kExitFindings : kExitClean;
}

struct MinimizeArgs {
    std::string inPath, outPath, workDir = "work", toolchainsPath, pivot = "java";
    bool differential = false;
    bool kotlinNullable = true;
};

int runMinimize(const MinimizeArgs& a) {
    ir::IrProgram prog = loadProgram(a.inPath);
    harness::ToolchainsConfig toolchains = loadToolchains(a.toolchainsPath);

    minimize::MinimizeOptions opts;
    opts.pivotLang = ir::detail::langFromString(a.pivot);
    opts.renderOptions.kotlinNullableRefs = a.kotlinNullable;

    std::size_t scratch = 0;
    auto oracle = [&](const ir::IrProgram&, const render::SourceBundle& bundle) {
        fs::path dir = fs::path(a.workDir) / std::to_string(scratch++);
        try {
            harness::TestResult r =
                a.differential ? harness::differentialTest(bundle, toolchains, dir)
                               : harness::normalTest(bundle, toolchains, dir);
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

    minimize::MinimizeOutcome out;
    try {
        out = minimize::minimizeProgram(prog, oracle, opts);
    } catch (const OracleDriftError&) {
        std::cerr << "minimize: the program does not reproduce a finding\n";
        return kExitClean;
    }

    emitProgram(out.program, a.outPath);
    ir::Json info;
    info["verdict"] = out.baseline.verdictClass;
    info["fingerprint"] = out.baseline.fingerprint;
    info["declarationsBefore"] = prog.declarations.size();
    info["declarationsAfter"] = out.program.declarations.size();
    info["oracleCalls"] = out.oracleCalls;
    info["forks"] = out.forks.size();
    std::cerr << ir::canonicalText(info);
    return kExitFindings;
}

struct CampaignArgs {
    std::string configPath, toolchainsPath, outDir = "runs";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> programs, mutants, forkDepth;
    std::string languages, mutationLanguages;
    bool noMinimize = false;
};

int runCampaignCmd(const CampaignArgs& a) {
    campaign::CampaignConfig cfg;
    if (!a.configPath.empty())
        cfg = campaign::campaignConfigFromJson(parseJsonFile(a.configPath));
    if (a.seed) cfg.seed = *a.seed;
    if (a.programs) cfg.programCount = *a.programs;
    if (a.mutants) cfg.mutantsPerProgram = *a.mutants;
    if (a.forkDepth) cfg.forkDepthLimit = *a.forkDepth;
    if (a.noMinimize) cfg.minimizeFindings = false;
    if (!a.languages.empty()) {
        cfg.generator.languages = parseLanguageList(a.languages);
        gen::validateConfig(cfg.generator);
    }
    if (!a.mutationLanguages.empty())
        cfg.mutation.languages = parseLanguageList(a.mutationLanguages);

    harness::ToolchainsConfig toolchains = loadToolchains(a.toolchainsPath);
    campaign::CampaignResult result =
        campaign::runCampaign(cfg, toolchains, a.outDir);

    std::cout << "run: " << result.runDir.string() << "\n"
              << "findings: " << result.findings.size() << "\n"
              << "summary: " << (result.runDir / "summary.json").string() << "\n";
    return result.findings.empty() ? kExitClean : kExitFindings;
}

struct ReportArgs {
    std::string runDir, outDir;
};

int runReport(const ReportArgs& a) {
    fs::path out = a.outDir.empty() ? fs::path(a.runDir) : fs::path(a.outDir);
    campaign::writeReport(a.runDir, out);
    std::cout << "report: " << (out / "report.md").string() << "\n";
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-language JVM compiler fuzzing toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* cmdGen = app.add_subcommand(
        "generate", "Generate one program or a corpus from a seed");
    cmdGen->add_option("--seed", gen.seed, "Generation seed");
    cmdGen->add_option("--count", gen.count, "How many programs (corpus mode)");
    cmdGen->add_option("--config", gen.configPath, "Generator config JSON");
    cmdGen->add_option("--out", gen.outPath, "Output file (single program)");
    cmdGen->add_option("--out-dir", gen.outDir, "Output directory (corpus)");
    cmdGen->add_option("--languages", gen.languages,
                       "Comma-separated language pool (must include java)");

    MutateArgs mut;
    CLI::App* cmdMut =
        app.add_subcommand("mutate", "Apply a seeded mutation to a program");
    cmdMut->add_option("--in", mut.inPath, "Program JSON")->required();
    cmdMut->add_option("--seed", mut.seed, "Mutation seed");
    cmdMut->add_option("--mutator", mut.mutator,
                       "lang-shuffle | function-removal | type-changer | "
                       "supertype-order-shuffle (default: seeded choice)");
    cmdMut->add_option("--out", mut.outPath, "Output file");
    cmdMut->add_option("--record", mut.recordPath, "Write the mutation record");
    cmdMut->add_option("--languages", mut.languages,
                       "Language pool for the retagger");

    TestArgs tst;
    CLI::App* cmdTest = app.add_subcommand(
        "test", "Render a program and compile it with the toolchains");
    cmdTest->add_option("--in", tst.inPath, "Program JSON")->required();
    cmdTest->add_option("--work", tst.workDir, "Work directory");
    cmdTest->add_option("--toolchains", tst.toolchainsPath,
                        "Toolchains JSON (default: stock javac/kotlinc/...)");
    cmdTest->add_flag("--differential", tst.differential,
                      "Compare all compiler variants instead of one compile");
    cmdTest->add_flag("!--no-kotlin-nullable", tst.kotlinNullable,
                      "Render Kotlin reference types non-nullable");

    MinimizeArgs min;
    CLI::App* cmdMin = app.add_subcommand(
        "minimize", "Shrink a finding while its fingerprint stays put");
    cmdMin->add_option("--in", min.inPath, "Program JSON")->required();
    cmdMin->add_option("--out", min.outPath, "Minimized program file");
    cmdMin->add_option("--work", min.workDir, "Work directory");
    cmdMin->add_option("--toolchains", min.toolchainsPath, "Toolchains JSON");
    cmdMin->add_option("--pivot", min.pivot, "Language to flatten toward");
    cmdMin->add_flag("--differential", min.differential,
                     "Reproduce via differential testing");
    cmdMin->add_flag("!--no-kotlin-nullable", min.kotlinNullable,
                     "Render Kotlin reference types non-nullable");

    CampaignArgs camp;
    CLI::App* cmdCamp = app.add_subcommand(
        "campaign", "Generate, mutate, test, dedup, and minimize in bulk");
    cmdCamp->add_option("--config", camp.configPath, "Campaign config JSON");
    std::uint64_t seedOpt = 0;
    std::size_t programsOpt = 0, mutantsOpt = 0, forkDepthOpt = 0;
    cmdCamp->add_option("--seed", seedOpt, "Campaign seed");
    cmdCamp->add_option("--programs", programsOpt, "Programs to generate");
    cmdCamp->add_option("--mutants", mutantsOpt, "Mutants per program");
    cmdCamp->add_option("--fork-depth", forkDepthOpt, "Fork recursion limit");
    cmdCamp->add_option("--toolchains", camp.toolchainsPath, "Toolchains JSON");
    cmdCamp->add_option("--out", camp.outDir, "Directory to place runs under");
    cmdCamp->add_option("--languages", camp.languages,
                        "Generator language pool (java plus at most one)");
    cmdCamp->add_option("--mutation-languages", camp.mutationLanguages,
                        "Language pool for the retagging mutator");
    cmdCamp->add_flag("--no-minimize", camp.noMinimize,
                      "Skip minimization of findings");

    ReportArgs rep;
    CLI::App* cmdRep = app.add_subcommand(
        "report", "Render report.json and report.md for a finished run");
    cmdRep->add_option("--run", rep.runDir, "Run directory")->required();
    cmdRep->add_option("--out-dir", rep.outDir,
                       "Where to write the report (default: the run dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;  // help/version exit clean
    }

    if (cmdCamp->count("--seed")) camp.seed = seedOpt;
    if (cmdCamp->count("--programs")) camp.programs = programsOpt;
    if (cmdCamp->count("--mutants")) camp.mutants = mutantsOpt;
    if (cmdCamp->count("--fork-depth")) camp.forkDepth = forkDepthOpt;

    try {
        if (app.got_subcommand(cmdGen)) return runGenerate(gen);
        if (app.got_subcommand(cmdMut)) return runMutate(mut);
        if (app.got_subcommand(cmdTest)) return runTest(tst);
        if (app.got_subcommand(cmdMin)) return runMinimize(min);
        if (app.got_subcommand(cmdCamp)) return runCampaignCmd(camp);
        if (app.got_subcommand(cmdRep)) return runReport(rep);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
