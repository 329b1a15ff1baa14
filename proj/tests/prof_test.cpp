#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "optika/catalog.hpp"
#include "optika/prof.hpp"

namespace optika {
namespace {

// Σ_m |p(n,m)|·|q(m,k)| computed straight from the fiber sizes.
std::size_t sum_of_products(const FinProfunctor& p, const FinProfunctor& q, std::size_t n, std::size_t k) {
    std::size_t total = 0;
    for (std::size_t m = 0; m < p.target.num_objects(); ++m) total += p.at(n, m).size() * q.at(m, k).size();
    return total;
}

TEST(Prof, HomProfunctorIsValid) {
    for (const auto& c : {catalog::walking_arrow(), catalog::walking_iso(), catalog::chain3(), catalog::cyclic_group(3),
                          catalog::empty_category()}) {
        EXPECT_TRUE(validate_profunctor(hom_profunctor(c)).ok());
    }
}

TEST(Prof, RepresentableProfunctorIsValid) {
    const auto p = catalog::functor(catalog::walking_arrow(), catalog::chain3(), {{"0", "0"}, {"1", "2"}}, {{"u", "ba"}});
    EXPECT_TRUE(validate_profunctor(representable_profunctor(p)).ok());
}

TEST(ProfCompose, DiscreteMatrixProduct) {
    const auto n = catalog::discrete({"n1", "n2"});
    const auto m = catalog::discrete({"m"});
    const auto k = catalog::discrete({"k1", "k2"});
    const auto p = matrix_profunctor(n, m, {{2}, {3}});
    const auto q = matrix_profunctor(m, k, {{1, 2}});
    const auto pq = prof_compose_full(p, q);
    ASSERT_TRUE(validate_profunctor(pq.result).ok());
    EXPECT_EQ(pq.result.at(0, 0).size(), 2u);
    EXPECT_EQ(pq.result.at(0, 1).size(), 4u);
    EXPECT_EQ(pq.result.at(1, 0).size(), 3u);
    EXPECT_EQ(pq.result.at(1, 1).size(), 6u);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            EXPECT_EQ(pq.result.at(a, b).size(), sum_of_products(p, q, a, b));
            // No identifications: every class is a single diagonal element.
            for (const auto& cls : pq.quotient(a, b).classes) EXPECT_EQ(cls.size(), 1u);
        }
    }
}

TEST(ProfCompose, DiscreteCollapseElementByElement) {
    std::mt19937 rng(11);
    const auto n = catalog::discrete({"a", "b"});
    const auto m = catalog::discrete({"x", "y", "z"});
    const auto k = catalog::discrete({"u", "v"});
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = gen::random_profunctor(rng, n, m, 3);
        const auto q = gen::random_profunctor(rng, m, k, 3);
        const auto pq = prof_compose_full(p, q);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                // The carrier is exactly the set of labels [m|<y,x>] of the coproduct.
                std::vector<Atom> expected;
                for (std::size_t mm = 0; mm < 3; ++mm) {
                    for (const auto& y : q.at(mm, b).elements()) {
                        for (const auto& x : p.at(a, mm).elements()) {
                            const Atom parts[2] = {y, x};
                            expected.push_back(class_label(m, mm, tuple_label(parts)));
                        }
                    }
                }
                EXPECT_EQ(pq.result.at(a, b), FinSet(expected));
            }
        }
    }
}

TEST(ProfCompose, EmptyRowAnnihilates) {
    const auto n = catalog::discrete({"n1", "n2"});
    const auto m = catalog::discrete({"m1", "m2"});
    const auto k = catalog::discrete({"k"});
    const auto p = matrix_profunctor(n, m, {{0, 0}, {1, 2}});
    const auto q = matrix_profunctor(m, k, {{3}, {1}});
    const auto pq = prof_compose(p, q);
    EXPECT_TRUE(pq.at(0, 0).empty());
    EXPECT_EQ(pq.at(1, 0).size(), 5u);
}

TEST(ProfCompose, MismatchThrows) {
    const auto p = hom_profunctor(catalog::walking_arrow());
    const auto q = hom_profunctor(catalog::walking_iso());
    EXPECT_THROW(prof_compose(p, q), MismatchError);
}

TEST(ProfCompose, NonDiscreteCompositeIsValidAndMatchesOracle) {
    std::mt19937 rng(5);
    const auto a = catalog::walking_arrow();
    for (int trial = 0; trial < 8; ++trial) {
        const auto p = gen::random_profunctor(rng, a, a, 2);
        const auto q = gen::random_profunctor(rng, a, a, 2);
        const auto pq = prof_compose_full(p, q);
        EXPECT_TRUE(validate_profunctor(pq.result).ok());
        for (std::size_t n = 0; n < 2; ++n) {
            for (std::size_t k = 0; k < 2; ++k) {
                EXPECT_EQ(oracle::partition_of(pq.quotient(n, k)),
                          oracle::zigzag_partition(pq.integrand(n, k).bifunctor));
            }
        }
    }
}

TEST(ProfAction, MatrixVectorCardinality) {
    const auto n = catalog::discrete({"n1", "n2"});
    const auto k = catalog::discrete({"k1"});
    const auto p = matrix_profunctor(n, k, {{2}, {3}});
    const auto a = catalog::copresheaf(n, {{"n1", {"a"}}, {"n2", {"b", "c"}}}, {});
    const auto pa = prof_action(p, a);
    EXPECT_EQ(pa.fiber[0].size(), 8u);
    EXPECT_EQ(pa.fiber[0].size(), 1u * 2u + 2u * 3u);
}

TEST(ProfAction, HomActsAsIdentity) {
    std::mt19937 rng(3);
    for (const auto& c : {catalog::walking_arrow(), catalog::walking_iso(), catalog::chain3(), catalog::idempotent()}) {
        for (int trial = 0; trial < 4; ++trial) {
            const auto a = gen::random_copresheaf(rng, c, 3);
            const auto w = action_unit_check(a);
            EXPECT_TRUE(w.verified) << w.detail;
        }
    }
}

TEST(ProfAction, EmptyPresheafGivesEmpty) {
    const auto c = catalog::walking_arrow();
    const auto a = catalog::copresheaf(c, {{"0", {}}, {"1", {}}}, {{"u", {}}});
    const auto pa = prof_action(hom_profunctor(c), a);
    for (const auto& f : pa.fiber) EXPECT_TRUE(f.empty());
}

TEST(ProfAction, ResultIsACoPresheaf) {
    std::mt19937 rng(8);
    const auto c = catalog::walking_arrow();
    for (int trial = 0; trial < 8; ++trial) {
        const auto p = gen::random_profunctor(rng, c, c, 2);
        const auto a = gen::random_copresheaf(rng, c, 2);
        EXPECT_TRUE(validate_copresheaf(prof_action(p, a)).ok());
    }
}

TEST(ActionComposition, Discrete) {
    const auto n = catalog::discrete({"n1", "n2"});
    const auto m = catalog::discrete({"m1", "m2"});
    const auto k = catalog::discrete({"k"});
    const auto p = matrix_profunctor(n, m, {{1, 2}, {0, 3}});
    const auto q = matrix_profunctor(m, k, {{2}, {1}});
    const auto a = catalog::copresheaf(n, {{"n1", {"a", "b"}}, {"n2", {"c"}}}, {});
    const auto res = action_composition(p, q, a);
    ASSERT_TRUE(res.witness.verified) << res.witness.detail;
    // Σ_n Σ_m a(n)·p(n,m)·q(m,k) = 2·(1·2 + 2·1) + 1·(0·2 + 3·1) = 11.
    EXPECT_EQ(res.lhs.result.fiber[0].size(), 11u);
}

TEST(ActionComposition, WalkingArrowMiddle) {
    std::mt19937 rng(21);
    const auto n = catalog::discrete({"n1", "n2"});
    const auto m = catalog::walking_arrow();
    const auto k = catalog::walking_iso();
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = gen::random_profunctor(rng, n, m, 2);
        const auto q = gen::random_profunctor(rng, m, k, 2);
        const auto a = gen::random_copresheaf(rng, n, 2);
        const auto w = action_composition_check(p, q, a);
        EXPECT_TRUE(w.verified) << w.detail;
    }
}

TEST(ActionComposition, EmptyMiddle) {
    const auto n = catalog::discrete({"n"});
    const auto m = catalog::empty_category();
    const auto k = catalog::discrete({"k"});
    const auto p = matrix_profunctor(n, m, {{}});
    const auto q = matrix_profunctor(m, k, {});
    const auto a = catalog::copresheaf(n, {{"n", {"a"}}}, {});
    const auto res = action_composition(p, q, a);
    EXPECT_TRUE(res.witness.verified);
    EXPECT_TRUE(res.lhs.result.fiber[0].empty());
    EXPECT_TRUE(res.rhs.result.fiber[0].empty());
}

TEST(UnitCheck, HomWithItself) {
    for (const auto& c : {catalog::walking_arrow(), catalog::cyclic_group(3), catalog::span()}) {
        const auto w = unit_check(hom_profunctor(c));
        EXPECT_TRUE(w.verified) << w.detail;
    }
}

TEST(UnitCheck, DiscreteIsLiteralMatrixIdentity) {
    const auto n = catalog::discrete({"a", "b"});
    const auto k = catalog::discrete({"x", "y", "z"});
    const auto p = matrix_profunctor(n, k, {{1, 0, 2}, {3, 1, 0}});
    const auto h = hom_profunctor(n);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(h.at(a, b).size(), a == b ? 1u : 0u);
    }
    const auto hp = prof_compose(h, p);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(hp.at(a, b).size(), p.at(a, b).size());
    }
    EXPECT_TRUE(unit_check(p).verified);
}

TEST(UnitCheck, RandomOnWalkingArrows) {
    std::mt19937 rng(13);
    const auto a = catalog::walking_arrow();
    const auto i = catalog::walking_iso();
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = unit_check(gen::random_profunctor(rng, a, i, 2));
        EXPECT_TRUE(w.verified) << w.detail;
    }
}

TEST(Associativity, RandomTriples) {
    std::mt19937 rng(17);
    const auto d = catalog::discrete({"d"});
    const auto a = catalog::walking_arrow();
    const auto i = catalog::walking_iso();
    for (int trial = 0; trial < 6; ++trial) {
        const auto p = gen::random_profunctor(rng, d, a, 2);
        const auto q = gen::random_profunctor(rng, a, i, 2);
        const auto r = gen::random_profunctor(rng, i, d, 2);
        const auto res = associativity(p, q, r);
        ASSERT_TRUE(res.witness.verified) << res.witness.detail;
        EXPECT_TRUE(res.to_single.verified);
        EXPECT_TRUE(res.from_single.verified);
    }
}

TEST(Associativity, WithHomProfunctors) {
    const auto a = catalog::walking_arrow();
    const auto h = hom_profunctor(a);
    EXPECT_TRUE(associativity_check(h, h, h).verified);
}

TEST(ProfNat, IdentityIsValid) {
    const auto p = hom_profunctor(catalog::walking_arrow());
    EXPECT_TRUE(validate_prof_nat(p, p, identity_prof_nat(p)).ok());
}

TEST(ProfNat, ActionIsFunctorialInTwoCells) {
    std::mt19937 rng(29);
    const auto c = catalog::walking_arrow();
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 8; ++trial) {
        const auto p = gen::random_profunctor(rng, c, c, 2);
        const auto p2 = gen::random_profunctor(rng, c, c, 2);
        const auto p3 = gen::random_profunctor(rng, c, c, 2);
        const auto h = gen::random_prof_nat(rng, p, p2);
        const auto h2 = gen::random_prof_nat(rng, p2, p3);
        if (!h || !h2) continue;
        ++checked;
        const auto a = gen::random_copresheaf(rng, c, 2);
        const auto pa = prof_action(p, a);
        const auto p2a = prof_action(p2, a);
        const auto ha = act_on_prof_nat(p, p2, *h, a);
        EXPECT_TRUE(validate_nat(pa, p2a, ha).ok());
        // Identities and composites go to identities and composites.
        EXPECT_EQ(act_on_prof_nat(p, p, identity_prof_nat(p), a), identity_nat(pa));
        ProfNat hh;
        for (std::size_t n = 0; n < 2; ++n) {
            hh.components.emplace_back();
            for (std::size_t k = 0; k < 2; ++k) {
                hh.components.back().push_back(compose_tables(h2->components[n][k], h->components[n][k]));
            }
        }
        EXPECT_EQ(act_on_prof_nat(p, p3, hh, a), compose_nats(ha, act_on_prof_nat(p2, p3, *h2, a)));
    }
    EXPECT_GT(checked, 0);
}

TEST(ProfNat, PlantedNonNaturalIsRejected) {
    // Constant profunctor {a, b} on the walking arrow; swapping only at <0,0> breaks the
    // square for u acting on the source.
    const auto c = catalog::walking_arrow();
    FinProfunctor p{c, c, std::vector<std::vector<FinSet>>(2, std::vector<FinSet>(2, FinSet({"a", "b"}))), {}, {}};
    p.contra.assign(3, std::vector<Table>(2, identity_table(2)));
    p.co.assign(3, std::vector<Table>(2, identity_table(2)));
    ASSERT_TRUE(validate_profunctor(p).ok());
    auto h = identity_prof_nat(p);
    h.components[0][0] = {1, 0};
    EXPECT_FALSE(validate_prof_nat(p, p, h).ok());
}

} // namespace
} // namespace optika
