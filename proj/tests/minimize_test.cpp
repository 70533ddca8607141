#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "xlang/minimize.hpp"
#include "xlang/validate.hpp"

using namespace xlang;

namespace {

// Five declarations, three languages, generics, and two independent
// inheritance islands; plenty of fat for the minimizer to trim.
ir::IrProgram richProgram() {
    ir::IrProgram p;

    ir::TypeDecl i0 = testutil::mkInterface("I0", ir::Lang::Kotlin);
    i0.methods.push_back(testutil::mkMethod("func", ir::MethodKind::Abstract,
                                            {ir::stringType()}, ir::stringType()));

    ir::TypeDecl a0 = testutil::mkClass("A0", ir::Lang::Java);
    a0.typeParams.push_back({"T0"});
    a0.supertypes.push_back({"I0", {}});
    a0.methods.push_back(testutil::mkMethod("func", ir::MethodKind::Normal,
                                            {ir::stringType()}, ir::stringType(),
                                            {{"I0", "func"}}));
    a0.methods.push_back(testutil::mkMethod(
        "extra", ir::MethodKind::Final,
        {ir::TypeRef::classType("A2", {ir::TypeRef::typeParam("T0")})},
        ir::unitType()));

    ir::TypeDecl a2 = testutil::mkClass("A2", ir::Lang::Kotlin);
    a2.typeParams.push_back({"T0"});
    a2.methods.push_back(testutil::mkMethod("helper", ir::MethodKind::Normal, {},
                                            ir::TypeRef::typeParam("T0")));

    ir::TypeDecl i3 = testutil::mkInterface("I3", ir::Lang::Java);
    i3.methods.push_back(
        testutil::mkMethod("other", ir::MethodKind::Abstract, {}, ir::topType()));

    ir::TypeDecl a4 = testutil::mkClass("A4", ir::Lang::Groovy);
    a4.supertypes.push_back({"I3", {}});
    a4.methods.push_back(testutil::mkMethod("other", ir::MethodKind::Normal, {},
                                            ir::topType(), {{"I3", "other"}}));

    p.declarations = {std::move(i0), std::move(a0), std::move(a2), std::move(i3),
                      std::move(a4)};
    return p;
}

bool hasOverrideEdge(const ir::IrProgram& p, const std::string& owner,
                     const std::string& method) {
    for (const auto& d : p.declarations)
        for (const auto& m : d.methods)
            for (const auto& r : m.overrides)
                if (r.decl == owner && r.method == method) return true;
    return false;
}

minimize::OracleResult flag(const std::string& fp) {
    return {true, "synthetic", fp};
}

}  // namespace

TEST(Minimize, ThrowsWhenTheOracleDoesNotFlagTheInput) {
    auto never = [](const ir::IrProgram&, const render::SourceBundle&) {
        return minimize::OracleResult{};
    };
    EXPECT_THROW(minimize::minimizeProgram(richProgram(), never),
                 OracleDriftError);
}

TEST(Minimize, ShrinksToTheDeclarationsTheFindingNeeds) {
    auto oracle = [](const ir::IrProgram& p, const render::SourceBundle&) {
        return hasOverrideEdge(p, "I0", "func") ? flag("edge")
                                                : minimize::OracleResult{};
    };

    minimize::MinimizeOutcome out =
        minimize::minimizeProgram(richProgram(), oracle);

    ASSERT_EQ(out.program.declarations.size(), 2u);
    EXPECT_EQ(out.program.declarations[0].name, "I0");
    EXPECT_EQ(out.program.declarations[1].name, "A0");
    for (const auto& d : out.program.declarations) {
        EXPECT_EQ(d.lang, ir::Lang::Java);  // flattened to the pivot
        ASSERT_EQ(d.methods.size(), 1u);
        EXPECT_EQ(d.methods[0].name, "func");
        EXPECT_TRUE(d.typeParams.empty());
    }
    EXPECT_TRUE(hasOverrideEdge(out.program, "I0", "func"));
    EXPECT_TRUE(ir::validate(out.program, ir::ValidationMode::Full).ok());
    EXPECT_TRUE(out.forks.empty());
    EXPECT_GT(out.oracleCalls, 0u);

    // 1-minimal: no remaining shrinking edit preserves the finding.
    for (auto& cand :
         minimize::detail::enumerateCandidates(out.program, ir::Lang::Java)) {
        if (!ir::validate(cand.program, ir::ValidationMode::StructuralOnly).ok())
            continue;
        minimize::OracleResult res =
            oracle(cand.program, render::SourceBundle{});
        EXPECT_FALSE(res.finding && res.fingerprint == "edge")
            << cand.pass << ": " << cand.detail;
    }
}

TEST(Minimize, RejectedProbesLeaveTheProgramByteIdentical) {
    ir::IrProgram input = richProgram();
    const std::string inputText = ir::canonicalText(input);

    // Flags only the exact input, so every probe must be rolled back.
    auto oracle = [&](const ir::IrProgram& p, const render::SourceBundle&) {
        return ir::canonicalText(p) == inputText ? flag("exact")
                                                 : minimize::OracleResult{};
    };

    minimize::MinimizeOutcome out = minimize::minimizeProgram(input, oracle);
    EXPECT_EQ(ir::canonicalText(out.program), inputText);
    EXPECT_FALSE(out.trail.empty());
    for (const auto& step : out.trail) EXPECT_FALSE(step.kept);
}

TEST(Minimize, EditThatSurfacesADifferentFindingBecomesAFork) {
    ir::IrProgram p;
    ir::TypeDecl a0 = testutil::mkClass("A0", ir::Lang::Java);
    a0.methods.push_back(testutil::mkMethod("func", ir::MethodKind::Normal, {},
                                            ir::stringType()));
    ir::TypeDecl i3 = testutil::mkInterface("I3", ir::Lang::Java);
    i3.methods.push_back(
        testutil::mkMethod("other", ir::MethodKind::Abstract, {}, ir::topType()));
    p.declarations = {std::move(a0), std::move(i3)};

    auto oracle = [](const ir::IrProgram& prog, const render::SourceBundle&) {
        if (!prog.findDecl("A0")) return minimize::OracleResult{};
        return flag(prog.findDecl("I3") ? "with-i3" : "plain");
    };

    minimize::MinimizeOutcome out = minimize::minimizeProgram(p, oracle);

    // The baseline fingerprint needs I3, so it survives; dropping it is a fork.
    ASSERT_EQ(out.program.declarations.size(), 2u);
    EXPECT_TRUE(out.program.findDecl("I3"));
    ASSERT_EQ(out.forks.size(), 1u);
    EXPECT_EQ(out.forks[0].result.fingerprint, "plain");
    EXPECT_EQ(out.forks[0].pass, "remove-decl");
    EXPECT_FALSE(out.forks[0].program.findDecl("I3"));

    // Methods were irrelevant to the fingerprint and got stripped.
    for (const auto& d : out.program.declarations)
        EXPECT_TRUE(d.methods.empty());
}

TEST(Minimize, KeepsGenericArityTheFindingDependsOn) {
    ir::IrProgram p;
    ir::TypeDecl i0 = testutil::mkInterface("I0", ir::Lang::Kotlin);
    i0.typeParams.push_back({"T0"});
    i0.methods.push_back(testutil::mkMethod(
        "func", ir::MethodKind::Abstract, {ir::TypeRef::typeParam("T0")},
        ir::unitType()));
    ir::TypeDecl a1 = testutil::mkClass("A1", ir::Lang::Java,
                                        ir::ClassModifier::Abstract);
    a1.supertypes.push_back({"I0", {ir::TypeRef::classType("A2")}});
    ir::TypeDecl a2 = testutil::mkClass("A2", ir::Lang::Scala);
    p.declarations = {std::move(i0), std::move(a1), std::move(a2)};

    auto oracle = [](const ir::IrProgram& prog, const render::SourceBundle&) {
        const ir::TypeDecl* a = prog.findDecl("A1");
        if (a && !a->supertypes.empty() && a->supertypes[0].target == "I0" &&
            a->supertypes[0].args.size() == 1)
            return flag("generic-super");
        return minimize::OracleResult{};
    };

    minimize::MinimizeOutcome out = minimize::minimizeProgram(p, oracle);

    ASSERT_EQ(out.program.declarations.size(), 2u);
    const ir::TypeDecl* i0min = out.program.findDecl("I0");
    const ir::TypeDecl* a1min = out.program.findDecl("A1");
    ASSERT_TRUE(i0min && a1min);
    EXPECT_EQ(i0min->typeParams.size(), 1u);  // arity is load-bearing
    EXPECT_TRUE(i0min->methods.empty());
    ASSERT_EQ(a1min->supertypes[0].args.size(), 1u);
    EXPECT_EQ(a1min->supertypes[0].args[0].key(), "b:string");
    EXPECT_FALSE(out.program.findDecl("A2"));

    auto keptPass = [&](const std::string& pass) {
        return std::any_of(out.trail.begin(), out.trail.end(),
                           [&](const minimize::MinimizeStep& s) {
                               return s.pass == pass && s.kept;
                           });
    };
    auto rejectedPass = [&](const std::string& pass) {
        return std::any_of(out.trail.begin(), out.trail.end(),
                           [&](const minimize::MinimizeStep& s) {
                               return s.pass == pass && !s.kept;
                           });
    };
    EXPECT_TRUE(keptPass("replace-custom-type"));
    EXPECT_TRUE(rejectedPass("remove-type-param"));
}

TEST(Minimize, PivotLanguageControlsFlattening) {
    ir::IrProgram p;
    ir::TypeDecl a0 = testutil::mkClass("A0", ir::Lang::Kotlin);
    a0.methods.push_back(
        testutil::mkMethod("func", ir::MethodKind::Normal, {}, ir::unitType()));
    ir::TypeDecl a1 = testutil::mkClass("A1", ir::Lang::Java);
    a1.methods.push_back(
        testutil::mkMethod("func2", ir::MethodKind::Normal, {}, ir::unitType()));
    p.declarations = {std::move(a0), std::move(a1)};

    auto oracle = [](const ir::IrProgram& prog, const render::SourceBundle&) {
        for (const auto& d : prog.declarations)
            if (d.lang == ir::Lang::Kotlin) return flag("needs-kotlin");
        return minimize::OracleResult{};
    };

    // Default pivot (Java): flattening A0 would lose the finding, so the
    // one Kotlin declaration survives with its language intact.
    minimize::MinimizeOutcome out = minimize::minimizeProgram(p, oracle);
    ASSERT_EQ(out.program.declarations.size(), 1u);
    EXPECT_EQ(out.program.declarations[0].name, "A0");
    EXPECT_EQ(out.program.declarations[0].lang, ir::Lang::Kotlin);
    EXPECT_TRUE(out.program.declarations[0].methods.empty());

    // Kotlin pivot: flattening now *moves toward* Kotlin and is kept.
    minimize::MinimizeOptions opts;
    opts.pivotLang = ir::Lang::Kotlin;
    minimize::MinimizeOutcome out2 = minimize::minimizeProgram(p, oracle, opts);
    ASSERT_EQ(out2.program.declarations.size(), 1u);
    EXPECT_EQ(out2.program.declarations[0].lang, ir::Lang::Kotlin);
}

TEST(Minimize, SupertypeOrderProbeRecordsForksButNeverKeeps) {
    ir::IrProgram p;
    ir::TypeDecl i0 = testutil::mkInterface("I0", ir::Lang::Java);
    ir::TypeDecl i1 = testutil::mkInterface("I1", ir::Lang::Java);
    ir::TypeDecl a0 = testutil::mkClass("A0", ir::Lang::Java);
    a0.supertypes.push_back({"I0", {}});
    a0.supertypes.push_back({"I1", {}});
    p.declarations = {std::move(i0), std::move(i1), std::move(a0)};

    auto oracle = [](const ir::IrProgram& prog, const render::SourceBundle&) {
        const ir::TypeDecl* a = prog.findDecl("A0");
        if (!a || a->supertypes.empty()) return minimize::OracleResult{};
        return flag(a->supertypes[0].target);
    };

    minimize::MinimizeOutcome out = minimize::minimizeProgram(p, oracle);
    ASSERT_EQ(out.program.declarations.size(), 3u);
    EXPECT_EQ(out.program.findDecl("A0")->supertypes[0].target, "I0");
    ASSERT_EQ(out.forks.size(), 1u);
    EXPECT_EQ(out.forks[0].pass, "reorder-supertypes");
    EXPECT_EQ(out.forks[0].result.fingerprint, "I1");
    EXPECT_EQ(out.forks[0].program.findDecl("A0")->supertypes[0].target, "I1");

    minimize::MinimizeOptions noProbe;
    noProbe.probeSupertypeOrder = false;
    minimize::MinimizeOutcome quiet = minimize::minimizeProgram(p, oracle, noProbe);
    EXPECT_TRUE(quiet.forks.empty());
}

TEST(Minimize, CandidatesComeOutInPassPriorityOrder) {
    std::vector<std::string> order;
    for (const auto& c :
         minimize::detail::enumerateCandidates(richProgram(), ir::Lang::Java))
        if (order.empty() || order.back() != c.pass) order.push_back(c.pass);

    std::vector<std::string> expected = {
        "remove-method", "flatten-language", "replace-custom-type",
        "concretize-type-param"};
    ASSERT_GE(order.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        EXPECT_EQ(order[i], expected[i]);
}

TEST(Minimize, EnforcesTheOracleCallBudget) {
    auto oracle = [](const ir::IrProgram& p, const render::SourceBundle&) {
        return hasOverrideEdge(p, "I0", "func") ? flag("edge")
                                                : minimize::OracleResult{};
    };
    minimize::MinimizeOptions opts;
    opts.maxOracleCalls = 3;
    EXPECT_THROW(minimize::minimizeProgram(richProgram(), oracle, opts), Error);
}
