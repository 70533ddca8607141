#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "conformance.hpp"
#include "test_util.hpp"
#include "xlang/generator.hpp"
#include "xlang/ir_json.hpp"
#include "xlang/metrics.hpp"
#include "xlang/validate.hpp"

using namespace xlang;

TEST(Generator, DeterministicForSameSeed) {
    gen::GenConfig cfg;
    auto a = gen::generateProgram(42, cfg);
    auto b = gen::generateProgram(42, cfg);
    EXPECT_EQ(ir::canonicalText(a), ir::canonicalText(b));
}

TEST(Generator, DistinctSeedsProduceDistinctPrograms) {
    std::set<std::string> texts;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        texts.insert(ir::canonicalText(gen::generateProgram(seed)));
    EXPECT_GE(texts.size(), 8u);
}

TEST(Generator, SeedIsRecordedOnTheProgram) {
    EXPECT_EQ(gen::generateProgram(1234).seed, 1234u);
}

TEST(Generator, DeclCountStaysInConfiguredRange) {
    gen::GenConfig cfg;
    cfg.declCount = {5, 5};
    EXPECT_EQ(gen::generateProgram(7, cfg).declarations.size(), 5u);

    cfg.declCount = {2, 6};
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto prog = gen::generateProgram(seed, cfg);
        EXPECT_GE(prog.declarations.size(), 2u);
        EXPECT_LE(prog.declarations.size(), 6u);
    }
}

TEST(Generator, EmptyRangeYieldsEmptyProgram) {
    gen::GenConfig cfg;
    cfg.declCount = {0, 0};
    auto prog = gen::generateProgram(3, cfg);
    EXPECT_TRUE(prog.declarations.empty());
    EXPECT_TRUE(ir::validate(prog).ok());
}

TEST(Generator, HonorsLanguageSet) {
    gen::GenConfig cfg;
    cfg.languages = {ir::Lang::Java};
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (const auto& d : gen::generateProgram(seed, cfg).declarations)
            EXPECT_EQ(d.lang, ir::Lang::Java);

    cfg.languages = {ir::Lang::Java, ir::Lang::Scala};
    bool sawScala = false;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (const auto& d : gen::generateProgram(seed, cfg).declarations) {
            EXPECT_TRUE(d.lang == ir::Lang::Java || d.lang == ir::Lang::Scala);
            sawScala |= d.lang == ir::Lang::Scala;
        }
    EXPECT_TRUE(sawScala);
}

// Structural conventions every generated program must follow: sequential
// A#/I# naming, supertypes that point strictly backwards with at most one
// class parent (listed first), distinct interface targets, and fresh base
// names for non-override methods.
static void checkConventions(const ir::IrProgram& prog) {
    int classIdx = 0, ifaceIdx = 0;
    std::set<std::string> freshNames;
    for (std::size_t i = 0; i < prog.declarations.size(); ++i) {
        const auto& d = prog.declarations[i];
        if (d.kind == ir::DeclKind::Class)
            ASSERT_EQ(d.name, "A" + std::to_string(classIdx++));
        else
            ASSERT_EQ(d.name, "I" + std::to_string(ifaceIdx++));

        int classParents = 0;
        std::set<std::string> targets;
        for (std::size_t s = 0; s < d.supertypes.size(); ++s) {
            const auto& super = d.supertypes[s];
            ASSERT_TRUE(targets.insert(super.target).second);
            const ir::TypeDecl* target = prog.findDecl(super.target);
            ASSERT_NE(target, nullptr);
            auto targetIdx = static_cast<std::size_t>(
                std::distance(prog.declarations.data(), target));
            ASSERT_LT(targetIdx, i) << d.name << " inherits forward";
            if (target->kind == ir::DeclKind::Class) {
                ++classParents;
                ASSERT_EQ(s, 0u) << "class parent must be listed first";
            }
        }
        ASSERT_LE(classParents, 1);

        for (const auto& m : d.methods) {
            if (m.overrides.empty()) {
                ASSERT_TRUE(freshNames.insert(m.name).second)
                    << "duplicate fresh method name " << m.name;
            }
        }
    }
}

TEST(Generator, GeneratedProgramsPassFullValidationAndConformance) {
    gen::GenConfig cfg;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto prog = gen::generateProgram(seed, cfg);
        auto report = ir::validate(prog);
        ASSERT_TRUE(report.ok()) << "seed " << seed << ": " << report.toString();
        auto violation = test::findTableViolation(prog);
        ASSERT_FALSE(violation.has_value()) << "seed " << seed << ": " << *violation;
        checkConventions(prog);

        // canonical JSON round-trips
        ASSERT_EQ(ir::canonicalText(ir::programFromText(ir::canonicalText(prog))),
                  ir::canonicalText(prog));
    }
}

TEST(Generator, OtherLanguagePairsStayValid) {
    for (ir::Lang other : {ir::Lang::Groovy, ir::Lang::Scala}) {
        gen::GenConfig cfg;
        cfg.languages = {ir::Lang::Java, other};
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto prog = gen::generateProgram(seed, cfg);
            ASSERT_TRUE(ir::validate(prog).ok());
            ASSERT_FALSE(test::findTableViolation(prog).has_value());
        }
    }
}

TEST(Generator, RelaxedAbstractMustStillConformsUnderRelaxedCheck) {
    gen::GenConfig cfg;
    cfg.abstractClassesMayDeferMust = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto prog = gen::generateProgram(seed, cfg);
        ASSERT_FALSE(test::findTableViolation(prog, false).has_value());
        // Deferred obligations may leave abstract signatures open in abstract
        // classes, but the program must still be structurally sound.
        ASSERT_TRUE(ir::validate(prog, ir::ValidationMode::StructuralOnly).ok());
    }
}

TEST(Generator, SomeProgramsExerciseGenericsAndCrossLanguageEdges) {
    int generics = 0, cross = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto prog = gen::generateProgram(seed);
        generics += ir::isGenericsRelated(prog) ? 1 : 0;
        cross += ir::isCrossLanguage(prog) ? 1 : 0;
    }
    EXPECT_GT(generics, 10);
    EXPECT_GT(cross, 10);
}

TEST(GenConfig, ValidatesRangesAndProbabilities) {
    gen::GenConfig cfg;
    cfg.declCount = {5, 2};
    EXPECT_THROW(gen::validateConfig(cfg), ConfigError);

    cfg = {};
    cfg.methodCount = {-1, 2};
    EXPECT_THROW(gen::validateConfig(cfg), ConfigError);

    cfg = {};
    cfg.canOverrideProb = 1.5;
    EXPECT_THROW(gen::validateConfig(cfg), ConfigError);

    cfg = {};
    cfg.languages = {ir::Lang::Kotlin};
    EXPECT_THROW(gen::validateConfig(cfg), ConfigError);

    cfg = {};
    cfg.languages = {ir::Lang::Java, ir::Lang::Kotlin, ir::Lang::Scala};
    EXPECT_THROW(gen::validateConfig(cfg), ConfigError);

    cfg = {};
    EXPECT_NO_THROW(gen::validateConfig(cfg));
}

TEST(GenConfig, JsonRoundTrip) {
    gen::GenConfig cfg;
    cfg.declCount = {3, 7};
    cfg.interfaceRatio = 0.25;
    cfg.languages = {ir::Lang::Java, ir::Lang::Groovy};
    cfg.abstractClassesMayDeferMust = true;
    auto parsed = gen::genConfigFromJson(gen::toJson(cfg));
    EXPECT_EQ(gen::toJson(parsed), gen::toJson(cfg));
}

TEST(GenConfig, JsonRejectsMalformedInput) {
    EXPECT_THROW(gen::genConfigFromJson(ir::Json::parse(R"({"declCount":[1]})")),
                 ConfigError);
    EXPECT_THROW(
        gen::genConfigFromJson(ir::Json::parse(R"({"languages":["kotlin"]})")),
        ConfigError);
    EXPECT_THROW(
        gen::genConfigFromJson(ir::Json::parse(R"({"interfaceRatio":"high"})")),
        ConfigError);
    // unknown keys are ignored, defaults apply
    auto cfg = gen::genConfigFromJson(ir::Json::parse(R"({"unknown":1})"));
    EXPECT_EQ(cfg.declCount, (std::pair<int, int>{4, 12}));
}
