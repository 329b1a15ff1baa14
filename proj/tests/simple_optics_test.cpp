#include <gtest/gtest.h>

#include <random>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "optika/catalog.hpp"
#include "optika/simple_optics.hpp"

namespace optika {
namespace {

using gen::atoms;

std::vector<FinMonoidalCategory> bundled_monoidals() {
    return {catalog::trivial_monoidal(), catalog::discrete_cyclic_monoidal(2), catalog::discrete_cyclic_monoidal(3),
            catalog::walking_iso_xor(), catalog::cyclic_group_monoidal(2), catalog::cyclic_group_monoidal(3)};
}

TEST(Monoidal, BundledInstancesValidate) {
    for (const auto& mc : bundled_monoidals()) {
        const auto r = validate_monoidal(mc);
        EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
    }
}

TEST(Monoidal, NonAssociativeTensorIsRejected) {
    // Z/3 with x ⊗ y = x - y is not associative, so the identity associator has the wrong type.
    auto mc = catalog::discrete_cyclic_monoidal(3);
    const auto& c = mc.underlying;
    for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            const auto v = std::stoi(c.object(x)), w = std::stoi(c.object(y));
            const auto z = c.object_index(std::to_string(((v - w) % 3 + 3) % 3));
            mc.tensor_obj[x * 3 + y] = z;
            mc.tensor_mor[c.identity(x) * 3 + c.identity(y)] = c.identity(z);
        }
    }
    EXPECT_FALSE(validate_monoidal(mc).ok());
}

TEST(Monoidal, NonNaturalAssociatorIsRejected) {
    // On the walking isomorphism, using the swap as left unitor at one object breaks the
    // unitor's typing or naturality.
    auto mc = catalog::walking_iso_xor();
    mc.left_unitor[0] = mc.underlying.morphism_index("u");
    EXPECT_FALSE(validate_monoidal(mc).ok());
}

std::vector<MonoidalAction> bundled_actions() {
    std::vector<MonoidalAction> out;
    for (const auto& mc : bundled_monoidals()) {
        out.push_back(catalog::trivial_action(mc, catalog::walking_arrow()));
        out.push_back(catalog::regular_action(mc, catalog::walking_arrow()));
    }
    out.push_back(catalog::cyclic_shift_action(2, 4));
    out.push_back(catalog::cyclic_shift_action(3, 3));
    return out;
}

TEST(Action, BundledInstancesValidate) {
    for (const auto& act : bundled_actions()) {
        const auto r = validate_action(act);
        EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
    }
}

TEST(Action, BrokenMultiplicatorIsRejected) {
    auto act = catalog::cyclic_shift_action(2, 4);
    act.multiplicator[0] = act.on.morphism_index("g2");
    EXPECT_FALSE(validate_action(act).ok());
}

TEST(Action, NonFunctorialActionIsRejected) {
    auto act = catalog::cyclic_shift_action(2, 4);
    // g • e should be g2; make it g1.
    act.app_mor[act.acting.underlying.morphism_index("g1") * act.on.num_morphisms() + act.on.identity(0)] =
        act.on.morphism_index("g1");
    EXPECT_FALSE(validate_action(act).ok());
}

TEST(OpticCoend, TrivialMonoidalGivesHomProduct) {
    const auto c = catalog::chain3();
    const auto act = catalog::trivial_action(catalog::trivial_monoidal(), c);
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                for (std::size_t t = 0; t < 3; ++t) {
                    const auto sp = optic_coend(act, act, a, b, s, t);
                    EXPECT_EQ(sp.quotient.size(), c.hom(s, a).size() * c.hom(b, t).size());
                }
            }
        }
    }
}

TEST(OpticCoend, DiscreteMonoidalIsDisjointUnion) {
    const auto c = catalog::walking_arrow();
    const auto act = catalog::trivial_action(catalog::discrete_cyclic_monoidal(2), c);
    const auto sp = optic_coend(act, act, 1, 0, 0, 1);
    EXPECT_EQ(sp.quotient.size(), 2u);
    for (const auto& cls : sp.quotient.classes) EXPECT_EQ(cls.size(), 1u);
    std::set<std::size_t> residuals;
    for (const auto& cls : sp.quotient.classes) residuals.insert(cls.front().object);
    EXPECT_EQ(residuals.size(), 2u);
}

TEST(OpticCoend, ClassesMatchZigZagOracle) {
    for (const auto& act : bundled_actions()) {
        const auto& c = act.on;
        for (std::size_t a = 0; a < c.num_objects(); ++a) {
            for (std::size_t s = 0; s < c.num_objects(); ++s) {
                const auto sp = optic_coend(act, act, a, a, s, s);
                const auto oracle = oracle::zigzag_partition(sp.integrand.bifunctor);
                EXPECT_EQ(oracle::partition_of(sp.quotient), oracle);
            }
        }
    }
}

TEST(OpticCoend, CyclicShiftHalvesTheCount) {
    // Z/2 acts freely on Z/4 × Z/4 by (h, k) ↦ (h g², g² k).
    const auto act = catalog::cyclic_shift_action(2, 4);
    const auto sp = optic_coend(act, act, 0, 0, 0, 0);
    EXPECT_EQ(sp.quotient.size(), 8u);
}

TEST(OpticCoend, RejectsActionsOfDifferentCategories) {
    const auto act1 = catalog::trivial_action(catalog::trivial_monoidal(), catalog::walking_arrow());
    const auto act2 = catalog::trivial_action(catalog::discrete_cyclic_monoidal(2), catalog::walking_arrow());
    EXPECT_THROW(optic_coend(act1, act2, 0, 0, 0, 0), MismatchError);
}

// All optics with the given endpoints, one per integrand element.
std::vector<ExistentialOptic> all_optics(const OpticSpace& sp) {
    std::vector<ExistentialOptic> out;
    for (const auto& cls : sp.quotient.classes) {
        for (const auto& mem : cls) out.push_back(sp.member(mem));
    }
    return out;
}

struct ExactCase {
    MonoidalAction act;
    std::vector<std::size_t> objects;
};

std::vector<ExactCase> exact_cases() {
    std::vector<ExactCase> out;
    out.push_back({catalog::cyclic_shift_action(2, 4), {0}});
    out.push_back({catalog::cyclic_shift_action(3, 3), {0}});
    const auto reg = catalog::regular_action(catalog::walking_iso_xor(), catalog::walking_arrow());
    out.push_back({reg, {0, 1, 3}});
    const auto reg2 = catalog::regular_action(catalog::cyclic_group_monoidal(2), catalog::walking_arrow());
    out.push_back({reg2, {0, 1}});
    return out;
}

TEST(ComposeOptics, MembersAreValidOptics) {
    for (const auto& ec : exact_cases()) {
        for (auto a : ec.objects) {
            for (auto s : ec.objects) {
                const auto sp = optic_coend(ec.act, ec.act, a, a, s, s);
                for (std::size_t k = 0; k < sp.quotient.size(); ++k) {
                    for (const auto& mem : sp.quotient.classes[k]) {
                        const auto o = sp.member(mem);
                        EXPECT_TRUE(validate_optic(ec.act, ec.act, o).ok());
                        EXPECT_EQ(sp.class_of(o), k);
                    }
                }
            }
        }
    }
}

TEST(ComposeOptics, UnitLaws) {
    for (const auto& ec : exact_cases()) {
        const auto& act = ec.act;
        for (auto a : ec.objects) {
            for (auto s : ec.objects) {
                const auto sp = optic_coend(act, act, a, a, s, s);
                const auto ida = identity_optic(act, act, a, a);
                const auto ids = identity_optic(act, act, s, s);
                for (const auto& o : all_optics(sp)) {
                    EXPECT_EQ(sp.class_of(compose_optics(act, act, o, ids)), sp.class_of(o));
                    EXPECT_EQ(sp.class_of(compose_optics(act, act, ida, o)), sp.class_of(o));
                }
            }
        }
    }
}

TEST(ComposeOptics, RepresentativeIndependence) {
    for (const auto& ec : exact_cases()) {
        const auto& act = ec.act;
        for (auto a : ec.objects) {
            for (auto s : ec.objects) {
                for (auto u : ec.objects) {
                    const auto sp1 = optic_coend(act, act, a, a, s, s);
                    const auto sp2 = optic_coend(act, act, s, s, u, u);
                    const auto sp = optic_coend(act, act, a, a, u, u);
                    for (const auto& c1 : sp1.quotient.classes) {
                        for (const auto& c2 : sp2.quotient.classes) {
                            std::set<std::size_t> results;
                            for (const auto& m1 : c1) {
                                for (const auto& m2 : c2) {
                                    results.insert(sp.class_of(compose_optics(act, act, sp1.member(m1), sp2.member(m2))));
                                }
                            }
                            EXPECT_EQ(results.size(), 1u);
                        }
                    }
                }
            }
        }
    }
}

TEST(ComposeOptics, Associativity) {
    for (const auto& ec : exact_cases()) {
        const auto& act = ec.act;
        const auto x = ec.objects.front(), y = ec.objects.back();
        const auto sp1 = optic_coend(act, act, x, x, y, y);
        const auto sp2 = optic_coend(act, act, y, y, x, x);
        const auto sp3 = optic_coend(act, act, x, x, y, y);
        const auto sp = optic_coend(act, act, x, x, y, y);
        const auto o1s = all_optics(sp1), o2s = all_optics(sp2), o3s = all_optics(sp3);
        for (const auto& o1 : o1s) {
            for (const auto& o2 : o2s) {
                for (std::size_t k = 0; k < o3s.size(); k += 3) {
                    const auto& o3 = o3s[k];
                    const auto left = compose_optics(act, act, compose_optics(act, act, o1, o2), o3);
                    const auto right = compose_optics(act, act, o1, compose_optics(act, act, o2, o3));
                    EXPECT_EQ(sp.class_of(left), sp.class_of(right));
                }
            }
        }
    }
}

TEST(ComposeOptics, MiddleMismatchThrows) {
    const auto act = catalog::regular_action(catalog::walking_iso_xor(), catalog::walking_arrow());
    const auto o1 = identity_optic(act, act, 0, 0);
    const auto o2 = identity_optic(act, act, 1, 1);
    EXPECT_THROW(compose_optics(act, act, o1, o2), MismatchError);
}

// --- normal-form regime ---

TEST(Lens, EvidentProjectionLens) {
    // s = a × c0, get the first projection, put replaces it.
    const auto a = atoms(2, "a"), c0 = atoms(3, "c"), b = a;
    const TupleSet s(a, c0);
    ConcreteLens l{s.set(), s.set(), a, b, {}, {}};
    const TupleSet sb(s.set(), b);
    l.put.assign(sb.size(), 0);
    for (std::size_t x = 0; x < s.size(); ++x) {
        auto [u, v] = s.decode_pair(x);
        l.get.push_back(u);
        for (std::size_t y = 0; y < b.size(); ++y) l.put[sb.encode(x, y)] = s.encode(y, v);
    }
    // The same lens presented with residual c0.
    SetOptic o{OpticKind::lens, c0, a, b, s.set(), s.set(), {}, {}};
    const auto ma = product_action(c0, a);
    const auto mb = product_action(c0, b);
    for (std::size_t x = 0; x < s.size(); ++x) {
        auto [u, v] = s.decode_pair(x);
        o.forward.push_back(ma.encode(v, u));
    }
    o.backward.assign(mb.size(), 0);
    for (std::size_t e = 0; e < mb.size(); ++e) {
        auto [v, y] = mb.decode_pair(e);
        o.backward[e] = s.encode(y, v);
    }
    ASSERT_TRUE(validate_set_optic(o).ok());
    EXPECT_EQ(lens_concretize(o), l);
}

TEST(Lens, ResidualSAndSTimesOneAgree) {
    const auto s = atoms(2, "s"), a = atoms(2, "a"), b = atoms(2, "b"), t = atoms(2, "t");
    // get = (s0 ↦ a1, s1 ↦ a0); put(x, y) = t_{x xor y}.
    ConcreteLens l{s, t, a, b, {1, 0}, {}};
    const TupleSet sb(s, b);
    l.put.assign(4, 0);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) l.put[sb.encode(x, y)] = x ^ y;
    }
    const auto by_s = lens_abstract(l);
    // Residual s × {*} by hand.
    const TupleSet s1(s, FinSet({"*"}));
    SetOptic by_s1{OpticKind::lens, s1.set(), a, b, s, t, {}, {}};
    const auto ma = product_action(s1.set(), a);
    const auto mb = product_action(s1.set(), b);
    for (std::size_t x = 0; x < 2; ++x) by_s1.forward.push_back(ma.encode(s1.encode(x, 0), l.get[x]));
    by_s1.backward.assign(mb.size(), 0);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) by_s1.backward[mb.encode(s1.encode(x, 0), y)] = l.put[sb.encode(x, y)];
    }
    EXPECT_NE(by_s.residual, by_s1.residual);
    EXPECT_EQ(lens_concretize(by_s), lens_concretize(by_s1));
    EXPECT_TRUE(same_normal_form(by_s, by_s1));
    // They are one zig-zag step apart along s × {*} -> s.
    EXPECT_TRUE(zigzag_related(by_s1, by_s, {0, 1}));
}

// Every concrete lens with the given sizes if there are at most `limit`, otherwise
// `samples` random ones.
std::vector<ConcreteLens> lenses(std::mt19937& rng, std::size_t ns, std::size_t na, std::size_t nb, std::size_t nt,
                                 std::size_t limit, std::size_t samples) {
    const auto s = atoms(ns, "s"), a = atoms(na, "a"), b = atoms(nb, "b"), t = atoms(nt, "t");
    std::vector<ConcreteLens> out;
    const auto gets = all_functions(ns, na);
    if (gets.empty()) return out;
    double count = gets.size();
    for (std::size_t i = 0; i < ns * nb; ++i) count *= double(nt);
    if (count == 0) return out;
    if (count <= double(limit)) {
        for (const auto& g : gets) {
            for (const auto& p : all_functions(ns * nb, nt)) out.push_back({s, t, a, b, g, p});
        }
        return out;
    }
    for (std::size_t k = 0; k < samples; ++k) {
        out.push_back({s, t, a, b, oracle::random_table(rng, ns, na), oracle::random_table(rng, ns * nb, nt)});
    }
    return out;
}

std::vector<ConcretePrism> prisms(std::mt19937& rng, std::size_t ns, std::size_t na, std::size_t nb, std::size_t nt,
                                  std::size_t limit, std::size_t samples) {
    const auto s = atoms(ns, "s"), a = atoms(na, "a"), b = atoms(nb, "b"), t = atoms(nt, "t");
    std::vector<ConcretePrism> out;
    double count = 1;
    for (std::size_t i = 0; i < ns; ++i) count *= double(nt + na);
    for (std::size_t i = 0; i < nb; ++i) count *= double(nt);
    if (count == 0) return out;
    if (count <= double(limit)) {
        for (const auto& m : all_functions(ns, nt + na)) {
            for (const auto& bu : all_functions(nb, nt)) out.push_back({s, t, a, b, m, bu});
        }
        return out;
    }
    for (std::size_t k = 0; k < samples; ++k) {
        out.push_back({s, t, a, b, oracle::random_table(rng, ns, nt + na), oracle::random_table(rng, nb, nt)});
    }
    return out;
}

TEST(Lens, RoundTripAllSizesUpToFour) {
    std::mt19937 rng(11);
    std::size_t checked = 0;
    for (std::size_t ns = 0; ns <= 4; ++ns) {
        for (std::size_t na = 0; na <= 4; ++na) {
            for (std::size_t nb = 0; nb <= 4; ++nb) {
                for (std::size_t nt = 0; nt <= 4; ++nt) {
                    for (const auto& l : lenses(rng, ns, na, nb, nt, 256, 8)) {
                        const auto o = lens_abstract(l);
                        ASSERT_TRUE(validate_set_optic(o).ok());
                        ASSERT_EQ(lens_concretize(o), l);
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 1000u);
}

// A random existential lens or prism with a residual of the given size.
SetOptic random_set_optic(std::mt19937& rng, OpticKind kind, std::size_t nm, const FinSet& a, const FinSet& b,
                          const FinSet& s, const FinSet& t) {
    SetOptic o{kind, atoms(nm, "r"), a, b, s, t, {}, {}};
    o.forward = oracle::random_table(rng, s.size(), o.act_size(a));
    o.backward = oracle::random_table(rng, o.act_size(b), t.size());
    return o;
}

TEST(Lens, AbstractOfConcreteIsOneZigZagAway) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = atoms(gen::pick(rng, 0, 3), "s"), a = atoms(gen::pick(rng, 1, 3), "a");
        const auto b = atoms(gen::pick(rng, 0, 3), "b"), t = atoms(gen::pick(rng, 1, 3), "t");
        const auto o = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 3), a, b, s, t);
        ASSERT_TRUE(validate_set_optic(o).ok());
        const auto n = lens_abstract(lens_concretize(o));
        // h: s -> m, the residual part of forward.
        Table h;
        const auto ma = product_action(o.residual, a);
        for (auto v : o.forward) h.push_back(ma.decode_pair(v).first);
        EXPECT_TRUE(zigzag_related(n, o, h));
        EXPECT_TRUE(same_normal_form(n, o));
    }
}

TEST(Lens, ComposeMatchesTextbook) {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = atoms(gen::pick(rng, 1, 3), "a"), b = atoms(gen::pick(rng, 0, 3), "b");
        const auto s = atoms(gen::pick(rng, 1, 3), "s"), t = atoms(gen::pick(rng, 1, 3), "t");
        const auto u = atoms(gen::pick(rng, 0, 3), "u"), v = atoms(gen::pick(rng, 1, 3), "v");
        const auto o1 = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 2), a, b, s, t);
        const auto o2 = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 2), s, t, u, v);
        const auto composed = compose_set_optics(o1, o2);
        ASSERT_TRUE(validate_set_optic(composed).ok());
        EXPECT_EQ(lens_concretize(composed), compose_lenses(lens_concretize(o1), lens_concretize(o2)));
    }
}

TEST(Lens, IdentityAndUnitLaws) {
    std::mt19937 rng(8);
    const auto a = atoms(2, "a"), b = atoms(3, "b");
    const auto id = lens_concretize(identity_set_optic(OpticKind::lens, a, b));
    EXPECT_EQ(id.get, identity_table(2));
    const TupleSet ab(a, b);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(id.put[ab.encode(x, y)], y);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = atoms(gen::pick(rng, 0, 3), "s"), t = atoms(gen::pick(rng, 1, 3), "t");
        const auto o = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 3), a, b, s, t);
        EXPECT_TRUE(same_normal_form(compose_set_optics(identity_set_optic(OpticKind::lens, a, b), o), o));
        EXPECT_TRUE(same_normal_form(compose_set_optics(o, identity_set_optic(OpticKind::lens, s, t)), o));
    }
}

TEST(Lens, Associativity) {
    std::mt19937 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FinSet> sets;
        for (int i = 0; i < 8; ++i) sets.push_back(atoms(gen::pick(rng, 1, 2), "x" + std::to_string(i)));
        const auto o1 = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 2), sets[0], sets[1], sets[2], sets[3]);
        const auto o2 = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 2), sets[2], sets[3], sets[4], sets[5]);
        const auto o3 = random_set_optic(rng, OpticKind::lens, gen::pick(rng, 1, 2), sets[4], sets[5], sets[6], sets[7]);
        const auto left = compose_set_optics(compose_set_optics(o1, o2), o3);
        const auto right = compose_set_optics(o1, compose_set_optics(o2, o3));
        EXPECT_TRUE(same_normal_form(left, right));
    }
}

TEST(Lens, WrongKindThrows) {
    const auto o = identity_set_optic(OpticKind::prism, atoms(1), atoms(1));
    EXPECT_THROW(lens_concretize(o), MismatchError);
    EXPECT_THROW(prism_concretize(identity_set_optic(OpticKind::lens, atoms(1), atoms(1))), MismatchError);
    EXPECT_THROW(compose_set_optics(o, identity_set_optic(OpticKind::lens, atoms(1), atoms(1))), MismatchError);
}

TEST(Prism, EvidentInjectionPrism) {
    // s = a + c0; match sends inl a to inr a and inr c to inl (inr c); build is inl.
    const auto a = atoms(2, "a"), c0 = atoms(2, "c");
    const SumSet s({"inl", "inr"}, {a, c0});
    const auto& t = s.set();
    ConcretePrism p{s.set(), t, a, a, {}, {}};
    const auto ta = coproduct_action(t, a);
    for (std::size_t x = 0; x < s.size(); ++x) {
        auto [side, v] = s.decode(x);
        p.match.push_back(side == 0 ? ta.encode(1, v) : ta.encode(0, x));
    }
    for (std::size_t y = 0; y < a.size(); ++y) p.build.push_back(s.encode(0, y));
    const auto o = prism_abstract(p);
    ASSERT_TRUE(validate_set_optic(o).ok());
    EXPECT_EQ(prism_concretize(o), p);
    // Build followed by match re-extracts the focus.
    for (std::size_t y = 0; y < a.size(); ++y) EXPECT_EQ(p.match[p.build[y]], ta.encode(1, y));
    // Presented with residual c0 instead of t.
    SetOptic by_c{OpticKind::prism, c0, a, a, s.set(), t, {}, {}};
    const auto ma = coproduct_action(c0, a);
    for (std::size_t x = 0; x < s.size(); ++x) {
        auto [side, v] = s.decode(x);
        by_c.forward.push_back(ma.encode(side == 0 ? 1 : 0, v));
    }
    const auto mb = coproduct_action(c0, a);
    by_c.backward.assign(mb.size(), 0);
    for (std::size_t e = 0; e < mb.size(); ++e) {
        auto [side, v] = mb.decode(e);
        by_c.backward[e] = s.encode(side == 0 ? 1 : 0, v);
    }
    EXPECT_EQ(prism_concretize(by_c), p);
}

TEST(Prism, RoundTripAllSizesUpToFour) {
    std::mt19937 rng(12);
    std::size_t checked = 0;
    for (std::size_t ns = 0; ns <= 4; ++ns) {
        for (std::size_t na = 0; na <= 4; ++na) {
            for (std::size_t nb = 0; nb <= 4; ++nb) {
                for (std::size_t nt = 0; nt <= 4; ++nt) {
                    for (const auto& p : prisms(rng, ns, na, nb, nt, 256, 8)) {
                        const auto o = prism_abstract(p);
                        ASSERT_TRUE(validate_set_optic(o).ok());
                        ASSERT_EQ(prism_concretize(o), p);
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 1000u);
}

TEST(Prism, AbstractOfConcreteIsOneZigZagAway) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = atoms(gen::pick(rng, 0, 3), "s"), a = atoms(gen::pick(rng, 0, 3), "a");
        const auto b = atoms(gen::pick(rng, 0, 3), "b"), t = atoms(gen::pick(rng, 1, 3), "t");
        const auto o = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 3), a, b, s, t);
        if (!validate_set_optic(o).ok()) continue;  // m + a may be empty while s is not
        const auto n = prism_abstract(prism_concretize(o));
        // h: m -> t, backward on the residual summand.
        Table h;
        const auto mb = coproduct_action(o.residual, b);
        for (std::size_t v = 0; v < o.residual.size(); ++v) h.push_back(o.backward[mb.encode(0, v)]);
        EXPECT_TRUE(zigzag_related(o, n, h));
        EXPECT_TRUE(same_normal_form(n, o));
    }
}

TEST(Prism, ComposeMatchesTextbook) {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = atoms(gen::pick(rng, 1, 3), "a"), b = atoms(gen::pick(rng, 0, 3), "b");
        const auto s = atoms(gen::pick(rng, 0, 3), "s"), t = atoms(gen::pick(rng, 1, 3), "t");
        const auto u = atoms(gen::pick(rng, 0, 3), "u"), v = atoms(gen::pick(rng, 1, 3), "v");
        const auto o1 = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 2), a, b, s, t);
        const auto o2 = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 2), s, t, u, v);
        if (!validate_set_optic(o1).ok() || !validate_set_optic(o2).ok()) continue;
        const auto composed = compose_set_optics(o1, o2);
        ASSERT_TRUE(validate_set_optic(composed).ok());
        EXPECT_EQ(prism_concretize(composed), compose_prisms(prism_concretize(o1), prism_concretize(o2)));
    }
}

TEST(Prism, UnitAndAssociativity) {
    std::mt19937 rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FinSet> sets;
        for (int i = 0; i < 8; ++i) sets.push_back(atoms(gen::pick(rng, 1, 2), "x" + std::to_string(i)));
        const auto o1 = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 2), sets[0], sets[1], sets[2], sets[3]);
        const auto o2 = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 2), sets[2], sets[3], sets[4], sets[5]);
        const auto o3 = random_set_optic(rng, OpticKind::prism, gen::pick(rng, 0, 2), sets[4], sets[5], sets[6], sets[7]);
        ASSERT_TRUE(validate_set_optic(o1).ok() && validate_set_optic(o2).ok() && validate_set_optic(o3).ok());
        EXPECT_TRUE(same_normal_form(compose_set_optics(compose_set_optics(o1, o2), o3),
                                     compose_set_optics(o1, compose_set_optics(o2, o3))));
        EXPECT_TRUE(
            same_normal_form(compose_set_optics(identity_set_optic(OpticKind::prism, sets[0], sets[1]), o1), o1));
        EXPECT_TRUE(
            same_normal_form(compose_set_optics(o1, identity_set_optic(OpticKind::prism, sets[2], sets[3])), o1));
    }
}

TEST(ZigZag, StepProducesRelatedPairWithEqualNormalForms) {
    std::mt19937 rng(40);
    for (auto kind : {OpticKind::lens, OpticKind::prism}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto a = atoms(gen::pick(rng, 1, 2), "a"), b = atoms(gen::pick(rng, 1, 2), "b");
            const auto s = atoms(gen::pick(rng, 0, 2), "s"), t = atoms(gen::pick(rng, 1, 2), "t");
            const auto m = atoms(gen::pick(rng, 1, 3), "m"), m2 = atoms(gen::pick(rng, 1, 3), "n");
            const auto h = oracle::random_table(rng, m.size(), m2.size());
            SetOptic probe{kind, m, a, b, s, t, {}, {}};
            SetOptic probe2{kind, m2, a, b, s, t, {}, {}};
            const auto f = oracle::random_table(rng, s.size(), probe.act_size(a));
            const auto g = oracle::random_table(rng, probe2.act_size(b), t.size());
            auto [left, right] = zigzag_step(kind, m, m2, h, a, b, s, t, f, g);
            EXPECT_TRUE(zigzag_related(left, right, h));
            EXPECT_TRUE(same_normal_form(left, right));
        }
    }
}

TEST(ZigZag, UnrelatedPairIsRejected) {
    const auto a = atoms(2, "a"), s = atoms(2, "s");
    const auto o = identity_set_optic(OpticKind::lens, a, a);
    auto other = o;
    other.backward = {1, 0};  // put swaps
    EXPECT_FALSE(zigzag_related(o, other, {0}));
    EXPECT_FALSE(same_normal_form(o, other));
    EXPECT_FALSE(zigzag_related(o, o, {1}));
}

std::size_t ipow(std::size_t x, std::size_t e) {
    std::size_t r = 1;
    while (e-- > 0) r *= x;
    return r;
}

TEST(FinSetCoend, LensClassesAreConcreteLenses) {
    struct Sizes {
        std::size_t s, a, b, t, k;
    };
    for (auto z : {Sizes{1, 1, 1, 1, 1}, Sizes{1, 2, 2, 2, 2}, Sizes{2, 2, 1, 2, 2}, Sizes{2, 1, 2, 2, 2},
                   Sizes{0, 2, 2, 2, 1}}) {
        const auto s = atoms(z.s, "s"), a = atoms(z.a, "a"), b = atoms(z.b, "b"), t = atoms(z.t, "t");
        const auto fc = finset_optic_coend(OpticKind::lens, z.k, a, b, s, t);
        EXPECT_EQ(fc.quotient.size(), ipow(z.a, z.s) * ipow(z.t, z.s * z.b));
        std::set<std::pair<Table, Table>> seen;
        for (const auto& cls : fc.quotient.classes) {
            const auto first = lens_concretize(member_optic(OpticKind::lens, fc, cls.front(), a, b, s, t));
            for (const auto& mem : cls) {
                EXPECT_EQ(lens_concretize(member_optic(OpticKind::lens, fc, mem, a, b, s, t)), first);
            }
            seen.insert({first.get, first.put});
        }
        EXPECT_EQ(seen.size(), fc.quotient.size());
    }
}

TEST(FinSetCoend, PrismClassesAreConcretePrisms) {
    struct Sizes {
        std::size_t s, a, b, t, k;
    };
    for (auto z : {Sizes{1, 1, 1, 1, 1}, Sizes{2, 1, 1, 2, 2}, Sizes{1, 2, 2, 2, 2}, Sizes{2, 0, 1, 1, 1}}) {
        const auto s = atoms(z.s, "s"), a = atoms(z.a, "a"), b = atoms(z.b, "b"), t = atoms(z.t, "t");
        const auto fc = finset_optic_coend(OpticKind::prism, z.k, a, b, s, t);
        EXPECT_EQ(fc.quotient.size(), ipow(z.t + z.a, z.s) * ipow(z.t, z.b));
        std::set<std::pair<Table, Table>> seen;
        for (const auto& cls : fc.quotient.classes) {
            const auto first = prism_concretize(member_optic(OpticKind::prism, fc, cls.front(), a, b, s, t));
            for (const auto& mem : cls) {
                EXPECT_EQ(prism_concretize(member_optic(OpticKind::prism, fc, mem, a, b, s, t)), first);
            }
            seen.insert({first.match, first.build});
        }
        EXPECT_EQ(seen.size(), fc.quotient.size());
    }
}

} // namespace
} // namespace optika
