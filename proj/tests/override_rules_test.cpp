#include <gtest/gtest.h>

#include <map>

#include "test_util.hpp"
#include "xlang/override_rules.hpp"
#include "xlang/signature.hpp"

using namespace xlang;
using namespace xlang::ir;
using namespace xlang::rules;
using testutil::mkClass;
using testutil::mkInterface;
using testutil::mkMethod;

namespace {

const std::vector<SuperMethodKind> kSupers = {
    SuperMethodKind::Null, SuperMethodKind::Abstract, SuperMethodKind::Final,
    SuperMethodKind::Normal};
const std::vector<InterfaceMethodConfig> kConfigs = {
    InterfaceMethodConfig::MultiAllAbstract,
    InterfaceMethodConfig::MultiSomeConcrete,
    InterfaceMethodConfig::OneAbstract,
    InterfaceMethodConfig::OneConcrete,
    InterfaceMethodConfig::None};

SuperMethodKind superFrom(const std::string& s) {
    for (auto k : kSupers)
        if (s == toString(k)) return k;
    throw Error("bad super kind in fixture: " + s);
}

InterfaceMethodConfig configFrom(const std::string& s) {
    for (auto c : kConfigs)
        if (s == toString(c)) return c;
    throw Error("bad interface config in fixture: " + s);
}

OverrideRequirement requirementFrom(const std::string& s) {
    for (auto r :
         {OverrideRequirement::Must, OverrideRequirement::Can,
          OverrideRequirement::Cant, OverrideRequirement::CantStar,
          OverrideRequirement::Impossible})
        if (s == toString(r)) return r;
    throw Error("bad requirement in fixture: " + s);
}

}  // namespace

// The 4x5 table, checked cell by cell against the hand-transcribed fixture.
TEST(OverrideRules, MatchesTranscribedTable) {
    auto doc = ir::Json::parse(
        testutil::readFile(testutil::fixturesDir() / "override_cells.json"));
    ASSERT_EQ(doc.at("schema"), "override-cells/1");
    const auto& cells = doc.at("cells");
    ASSERT_EQ(cells.size(), 20u);

    std::map<std::pair<SuperMethodKind, InterfaceMethodConfig>,
             OverrideRequirement>
        expected;
    for (const auto& cell : cells) {
        auto key = std::make_pair(superFrom(cell.at("super")),
                                  configFrom(cell.at("interfaces")));
        ASSERT_EQ(expected.count(key), 0u) << "fixture repeats a cell";
        expected[key] = requirementFrom(cell.at("requirement"));
    }
    ASSERT_EQ(expected.size(), 20u) << "fixture must cover all cells";

    for (auto super : kSupers)
        for (auto config : kConfigs)
            EXPECT_EQ(classifyOverride(super, config), expected.at({super, config}))
                << toString(super) << " x " << toString(config);
}

TEST(OverrideRules, TotalOverAllInputs) {
    for (auto super : kSupers)
        for (auto config : kConfigs) {
            OverrideRequirement r = classifyOverride(super, config);
            EXPECT_TRUE(r == OverrideRequirement::Must ||
                        r == OverrideRequirement::Can ||
                        r == OverrideRequirement::Cant ||
                        r == OverrideRequirement::CantStar ||
                        r == OverrideRequirement::Impossible);
        }
}

TEST(OverrideRules, ContextDerivationFromEntries) {
    FlowMethod abstractFlow{"I0", "func", MethodKind::Abstract, {}, unitType()};
    FlowMethod concreteFlow{"I1", "func", MethodKind::Normal, {}, unitType()};
    FlowMethod finalSuper{"A0", "func", MethodKind::Final, {}, unitType()};

    SignatureEntry e;
    e.signature = {"func", {}};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::None);
    EXPECT_EQ(superMethodKindOf(e), SuperMethodKind::Null);

    e.interfaceMethods = {abstractFlow};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::OneAbstract);
    e.interfaceMethods = {concreteFlow};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::OneConcrete);
    e.interfaceMethods = {abstractFlow, abstractFlow};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::MultiAllAbstract);
    e.interfaceMethods = {abstractFlow, concreteFlow};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::MultiSomeConcrete);
    e.interfaceMethods = {concreteFlow, concreteFlow};
    EXPECT_EQ(interfaceConfigOf(e), InterfaceMethodConfig::MultiSomeConcrete);

    e.superClassMethod = finalSuper;
    EXPECT_EQ(superMethodKindOf(e), SuperMethodKind::Final);
    EXPECT_EQ(classifyOverride(e), OverrideRequirement::CantStar);
}

// End to end on the final-vs-default trigger shape: final superclass method
// meets a concrete interface method; Kotlin cannot express the subclass.
TEST(OverrideRules, FinalDefaultClashIsTheAsymmetricCell) {
    IrProgram p = testutil::loadFixtureProgram("fig2");
    SignatureMap map = collectMethodSignatureMap(p, "C");
    ASSERT_EQ(map.size(), 1u);
    const SignatureEntry& e = map.begin()->second;
    EXPECT_EQ(contextOf(e).super, SuperMethodKind::Final);
    EXPECT_EQ(contextOf(e).interfaces, InterfaceMethodConfig::OneConcrete);
    EXPECT_EQ(classifyOverride(e), OverrideRequirement::CantStar);
}

TEST(OverrideRules, CantStarAdjustmentRetagsKotlinOnly) {
    TypeDecl kotlinDecl = mkClass("A0", Lang::Kotlin);
    EXPECT_TRUE(applyCantStarAdjustment(kotlinDecl, OverrideRequirement::CantStar));
    EXPECT_EQ(kotlinDecl.lang, Lang::Java);

    TypeDecl javaDecl = mkClass("A1", Lang::Java);
    EXPECT_FALSE(applyCantStarAdjustment(javaDecl, OverrideRequirement::CantStar));
    EXPECT_EQ(javaDecl.lang, Lang::Java);

    TypeDecl other = mkClass("A2", Lang::Kotlin);
    EXPECT_FALSE(applyCantStarAdjustment(other, OverrideRequirement::Cant));
    EXPECT_EQ(other.lang, Lang::Kotlin);
}

TEST(OverrideRules, Fig8ChildSitsInCantStar) {
    IrProgram p = testutil::loadFixtureProgram("fig8");
    SignatureMap map = collectMethodSignatureMap(p, "Child");
    ASSERT_EQ(map.size(), 1u);
    EXPECT_EQ(classifyOverride(map.begin()->second), OverrideRequirement::CantStar);
}
