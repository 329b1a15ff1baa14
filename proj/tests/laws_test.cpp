#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

#include "optika/laws.hpp"

namespace optika {
namespace {

TEST(Registry, EveryInvariantIsInExactlyOneSuite) {
    const auto suites = laws::invariant_suites();
    ASSERT_EQ(suites.size(), laws::module_invariants().size());
    for (std::size_t i = 0; i < suites.size(); ++i) {
        EXPECT_EQ(suites[i].size(), 1u) << laws::module_invariants()[i].statement;
    }
}

TEST(Registry, EveryModuleHasInvariants) {
    std::set<std::string> modules;
    for (const auto& inv : laws::module_invariants()) modules.insert(inv.module);
    EXPECT_EQ(modules, (std::set<std::string>{"fincat", "coend", "kan", "prof", "simple_optics", "poly"}));
}

TEST(Registry, LawNamesAreUniqueAndSuitesResolve) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& s : laws::registry()) {
        EXPECT_TRUE(seen.insert({s.suite, s.law}).second) << s.suite << "/" << s.law;
        EXPECT_NE(laws::suite_function(s.suite), nullptr) << s.suite;
    }
}

TEST(SuiteRun, CountsAndReportsTheFirstCounterexample) {
    laws::SuiteRun run("demo", {});
    run.law("clean", 1, [](laws::Tally& t) {
        for (int i = 0; i < 3; ++i) t.check(true, "f", [] { return std::string(); });
    });
    run.law("broken", 1, [](laws::Tally& t) {
        for (int i = 0; i < 3; ++i) t.check(i == 0, "f" + std::to_string(i), [i] { return "at " + std::to_string(i); });
    });
    run.law("empty_ok", 0, [](laws::Tally&) {});
    run.law("empty_required", 2, [](laws::Tally& t) { t.check(true, "", [] { return std::string(); }); });
    run.law("throws", 0, [](laws::Tally&) { throw ValidationError("boom"); });
    const auto r = run.finish();
    ASSERT_EQ(r.laws.size(), 5u);
    EXPECT_TRUE(r.laws[0].pass);
    EXPECT_EQ(r.laws[0].detail, "3 instances");
    EXPECT_FALSE(r.laws[1].pass);
    EXPECT_EQ(r.laws[1].detail, "f1: at 1 (1 more)");
    EXPECT_TRUE(r.laws[2].pass);
    EXPECT_EQ(r.laws[2].detail, "vacuous: no instances in the corpus");
    EXPECT_FALSE(r.laws[3].pass);
    EXPECT_EQ(r.laws[3].detail, "1 instances, need at least 2");
    EXPECT_FALSE(r.laws[4].pass);
    EXPECT_EQ(r.laws[4].detail, "error: boom");
    EXPECT_FALSE(r.ok());
}

TEST(SuiteRun, FilterSkipsLaws) {
    laws::SuiteRun run("demo", [](const std::string& law) { return law == "kept"; });
    run.law("kept", 0, [](laws::Tally&) {});
    run.law("dropped", 0, [](laws::Tally&) {});
    const auto r = run.finish();
    ASSERT_EQ(r.laws.size(), 1u);
    EXPECT_EQ(r.laws[0].name, "kept");
}

TEST(Render, LineFormat) {
    laws::SuiteReport r{"fincat", "2 categories", {{"a", true, "3 instances", 3}, {"b", false, "x.json: bad", 1}}, 12.0};
    EXPECT_EQ(laws::render_text({r}), "# suite fincat: 2 categories\nfincat/a: PASS (3 instances)\nfincat/b: FAIL (x.json: bad)\n");
    EXPECT_EQ(laws::render_text({r}, true).substr(0, 36), "# suite fincat: 2 categories (12 ms)");
    const auto j = laws::render_json({r});
    EXPECT_EQ(j["ok"], false);
    EXPECT_EQ(j["suites"][0]["laws"][1]["status"], "FAIL");
    EXPECT_FALSE(j["suites"][0].contains("wall_ms"));
}

// The hom bifunctor of the walking arrow has trace {id_0, id_1}: nothing runs 1 -> 0,
// so no zig-zag joins the two identities.
TEST(Oracles, ZigzagClassesOfTheWalkingArrowTrace) {
    const auto c = catalog::walking_arrow();
    const auto h = corpus::shipped::hom_bifunctor(c);
    const auto classes = laws::zigzag_classes(h);
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0].size(), 1u);
    EXPECT_EQ(classes[1].size(), 1u);
}

// For the one-object group Z/3 the trace of hom is its set of conjugacy classes, which
// for an abelian group is the whole group.
TEST(Oracles, ZigzagClassesOfAnAbelianGroupTrace) {
    const auto h = corpus::shipped::hom_bifunctor(catalog::cyclic_group(3));
    EXPECT_EQ(laws::zigzag_classes(h).size(), 3u);
}

TEST(Oracles, PiOfAnIdentityIsHom) {
    for (const auto& c : {catalog::walking_arrow(), catalog::chain3(), catalog::cyclic_group(2)}) {
        const auto id = identity_functor(c);
        for (std::size_t a = 0; a < c.num_objects(); ++a) {
            for (std::size_t b = 0; b < c.num_objects(); ++b) {
                EXPECT_EQ(laws::pi_oracle(id, a, b).size(), c.hom(a, b).size());
            }
        }
    }
}

TEST(Oracles, FunctorialityCounterexampleNamesTheComposite) {
    const auto c = catalog::cyclic_group(3);
    auto f = identity_functor(c);
    f.mor_map[c.morphism_index("g2")] = c.morphism_index("g1");
    const auto bad = laws::functoriality_counterexample(f);
    ASSERT_TRUE(bad.has_value());
    EXPECT_NE(bad->find("g1∘g1"), std::string::npos) << *bad;
    EXPECT_FALSE(laws::functoriality_counterexample(identity_functor(c)).has_value());
}

TEST(Sampling, TablesAndIndicesAreDeterministic) {
    EXPECT_EQ(laws::nth_table(5, 3, 2), (Table{1, 0, 1}));
    EXPECT_EQ(laws::nth_table(0, 0, 0), Table{});
    EXPECT_EQ(laws::sample_indices(5, 1).size(), 5u);
    const auto a = laws::sample_indices(1'000'000, 7), b = laws::sample_indices(1'000'000, 7);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 256u);
    for (auto i : a) EXPECT_LT(i, 1'000'000u);
}

TEST(Sampling, LensAndPrismCountsMatchEnumeration) {
    // Every index below the count decodes to a distinct concrete table pair.
    const auto s = laws::atoms(2, "s"), t = laws::atoms(2, "t"), a = laws::atoms(1, "a"), b = laws::atoms(2, "b");
    std::set<std::pair<Table, Table>> lenses, prisms;
    for (std::size_t i = 0; i < laws::lens_count(2, 2, 1, 2); ++i) {
        const auto l = laws::nth_lens(i, s, t, a, b);
        lenses.insert({l.get, l.put});
    }
    for (std::size_t i = 0; i < laws::prism_count(2, 2, 1, 2); ++i) {
        const auto p = laws::nth_prism(i, s, t, a, b);
        prisms.insert({p.match, p.build});
    }
    EXPECT_EQ(lenses.size(), 1u * 16u);
    EXPECT_EQ(prisms.size(), 9u * 4u);
}

TEST(Suites, ShippedCorpusPassesAtASmallBound) {
    const auto c = corpus::load_corpus({OPTIKA_SOURCE_DIR "/corpus"});
    const auto rs = laws::run_suites(c, {2});
    std::set<std::pair<std::string, std::string>> ran, registered;
    for (const auto& r : rs) {
        for (const auto& l : r.laws) {
            ran.insert({r.name, l.name});
            EXPECT_TRUE(l.pass) << r.name << "/" << l.name << ": " << l.detail;
        }
    }
    for (const auto& s : laws::registry()) registered.insert({s.suite, s.law});
    EXPECT_EQ(ran, registered);
    EXPECT_TRUE(laws::coverage_complete(laws::coverage(rs)));
}

} // namespace
} // namespace optika
