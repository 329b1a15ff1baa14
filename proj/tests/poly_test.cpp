#include <gtest/gtest.h>

#include <random>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "optika/poly.hpp"

namespace optika {
namespace {

const PolyFunctor y1 = monomials({{1, 1}});
const PolyFunctor y2 = monomials({{1, 2}});
const PolyFunctor y2_plus_y = monomials({{1, 2}, {1, 1}});

std::vector<PolyFunctor> small_polys() {
    return {monomials({}),       monomials({{2, 0}}),         y1,   y2, y2_plus_y, monomials({{2, 1}}),
            monomials({{1, 1}, {1, 0}}), monomials({{1, 3}})};
}

TEST(PolyEval, Counting) {
    EXPECT_EQ(eval_poly(y2, gen::atoms(3)).size(), 9u);
    EXPECT_EQ(eval_poly(y2_plus_y, gen::atoms(2)).size(), 6u);
    EXPECT_EQ(eval_poly(monomials({}), gen::atoms(2)).size(), 0u);
    EXPECT_EQ(eval_poly(monomials({{3, 0}}), gen::atoms(0)).size(), 3u);
}

TEST(PolyEval, MorphismActionIsFunctorial) {
    for (const auto& p : small_polys()) {
        for (std::size_t n = 0; n <= 3; ++n) {
            const auto yn = gen::atoms(n);
            EXPECT_EQ(eval_poly_mor(p, yn, yn, identity_table(n)), identity_table(eval_poly(p, yn).size()));
            for (std::size_t m = 0; m <= 3; ++m) {
                const auto ym = gen::atoms(m);
                for (std::size_t k = 0; k <= 2; ++k) {
                    const auto yk = gen::atoms(k);
                    for (const auto& f : all_functions(n, m)) {
                        const auto pf = eval_poly_mor(p, yn, ym, f);
                        for (const auto& g : all_functions(m, k)) {
                            EXPECT_EQ(eval_poly_mor(p, yn, yk, compose_tables(g, f)),
                                      compose_tables(eval_poly_mor(p, ym, yk, g), pf));
                        }
                    }
                }
            }
        }
    }
}

TEST(PolyLens, KnownCounts) {
    EXPECT_EQ(enumerate_polylenses(y1, y2).size(), 1u);
    EXPECT_EQ(enumerate_polylenses(y2, y1).size(), 2u);
    EXPECT_EQ(enumerate_polylenses(y1, monomials({{0, 1}})).size(), 0u);
    EXPECT_EQ(enumerate_polylenses(monomials({}), y2).size(), 1u);
    for (const auto& p : small_polys()) {
        for (const auto& q : small_polys()) {
            const auto all = enumerate_polylenses(p, q);
            EXPECT_EQ(all.size(), count_polylenses(p, q));
            for (const auto& l : all) EXPECT_TRUE(validate_polylens(l).ok());
        }
    }
}

TEST(PolyLens, DiagonalAndProjectionsAtSizeTwo) {
    const auto y = gen::atoms(2);
    const auto py = eval_poly(y1, y);
    const auto py2 = eval_poly(y2, y);
    // Elements of y as P(y) for P = y are the maps {d0} -> y.
    const auto diag = polylens_to_nat(enumerate_polylenses(y1, y2).front(), y);
    for (std::size_t e = 0; e < py.size(); ++e) {
        const auto u = py.values[e].direction[0];
        EXPECT_EQ(py2.values[diag[e]].direction, (Table{u, u}));
    }
    std::set<Table> evaluations;
    for (const auto& l : enumerate_polylenses(y2, y1)) {
        const auto proj = polylens_to_nat(l, y);
        // Some coordinate i with proj(u0, u1) = u_i for every pair.
        std::set<std::size_t> coords;
        for (std::size_t i = 0; i < 2; ++i) {
            bool all = true;
            for (std::size_t e = 0; e < py2.size(); ++e) {
                all = all && py.values[proj[e]].direction[0] == py2.values[e].direction[i];
            }
            if (all) coords.insert(i);
        }
        EXPECT_EQ(coords.size(), 1u);
        evaluations.insert(proj);
    }
    EXPECT_EQ(evaluations.size(), 2u);
}

TEST(PolyLens, IdentityGivesIdentityMaps) {
    for (const auto& p : small_polys()) {
        for (std::size_t n = 0; n <= 3; ++n) {
            EXPECT_EQ(polylens_to_nat(identity_polylens(p), gen::atoms(n)), identity_table(eval_poly(p, gen::atoms(n)).size()));
        }
    }
}

TEST(NatOracle, KnownCounts) {
    EXPECT_EQ(nat_oracle(y2, y1, 3).count, 2u);
    EXPECT_EQ(nat_oracle(y1, y2, 2).count, 1u);
    EXPECT_EQ(nat_oracle(y1, y1, 2).count, 1u);
    // Constant polynomials: families constant in y, one per map 2 -> 3.
    EXPECT_EQ(nat_oracle(monomials({{2, 0}}), monomials({{3, 0}}), 1).count, 9u);
}

TEST(NatOracle, RefusesSmallBound) {
    EXPECT_THROW(nat_oracle(y2, y1, 2), ValidationError);
    EXPECT_THROW(nat_oracle(monomials({{2, 0}}), y1, 0), ValidationError);
}

TEST(NatOracle, FormulaMatchesOracleOnEveryPair) {
    for (const auto& p : small_polys()) {
        for (const auto& q : small_polys()) {
            const auto bound = nat_oracle_min_bound(p);
            const auto oracle = nat_oracle(p, q, bound);
            const auto lenses = enumerate_polylenses(p, q);
            ASSERT_EQ(lenses.size(), oracle.count);
            // Each lens induces one of the oracle's families, and distinct lenses distinct ones.
            std::set<std::vector<Table>> families(oracle.solutions.begin(), oracle.solutions.end());
            std::set<std::vector<Table>> induced;
            for (const auto& l : lenses) {
                std::vector<Table> fam;
                for (std::size_t n = 0; n <= bound; ++n) fam.push_back(polylens_to_nat(l, oracle_set(n)));
                EXPECT_TRUE(families.count(fam));
                induced.insert(fam);
            }
            EXPECT_EQ(induced.size(), lenses.size());
        }
    }
}

TEST(ComposePolyLens, IdentityEitherSide) {
    for (const auto& p : small_polys()) {
        for (const auto& q : small_polys()) {
            for (const auto& l : enumerate_polylenses(p, q)) {
                EXPECT_EQ(compose_polylens(identity_polylens(p), l), l);
                EXPECT_EQ(compose_polylens(l, identity_polylens(q)), l);
            }
        }
    }
}

TEST(ComposePolyLens, AgreesWithPointwiseComposition) {
    const auto polys = small_polys();
    for (const auto& p : polys) {
        for (const auto& q : polys) {
            for (const auto& r : {y1, y2, y2_plus_y}) {
                const auto l1s = enumerate_polylenses(p, q);
                const auto l2s = enumerate_polylenses(q, r);
                for (std::size_t i = 0; i < l1s.size(); i += 1 + l1s.size() / 6) {
                    for (std::size_t j = 0; j < l2s.size(); j += 1 + l2s.size() / 6) {
                        const auto c = compose_polylens(l1s[i], l2s[j]);
                        ASSERT_TRUE(validate_polylens(c).ok());
                        for (std::size_t n = 0; n <= 3; ++n) {
                            const auto y = gen::atoms(n);
                            EXPECT_EQ(polylens_to_nat(c, y),
                                      compose_tables(polylens_to_nat(l2s[j], y), polylens_to_nat(l1s[i], y)));
                        }
                    }
                }
            }
        }
    }
}

TEST(ComposePolyLens, ProjectionThenDiagonal) {
    const auto diag = enumerate_polylenses(y1, y2).front();
    for (const auto& proj : enumerate_polylenses(y2, y1)) {
        const auto c = compose_polylens(proj, diag);
        for (std::size_t n = 0; n <= 3; ++n) {
            const auto y = gen::atoms(n);
            EXPECT_EQ(polylens_to_nat(c, y), compose_tables(polylens_to_nat(diag, y), polylens_to_nat(proj, y)));
        }
    }
}

TEST(ComposePolyLens, AssociativeOnRandomTriples) {
    std::mt19937 rng(3);
    const auto polys = small_polys();
    for (int trial = 0; trial < 60; ++trial) {
        const auto& p = polys[gen::pick(rng, 0, polys.size() - 1)];
        const auto& q = polys[gen::pick(rng, 0, polys.size() - 1)];
        const auto& r = polys[gen::pick(rng, 0, polys.size() - 1)];
        const auto& s = polys[gen::pick(rng, 0, polys.size() - 1)];
        const auto a = enumerate_polylenses(p, q), b = enumerate_polylenses(q, r), c = enumerate_polylenses(r, s);
        if (a.empty() || b.empty() || c.empty()) continue;
        const auto& l1 = a[gen::pick(rng, 0, a.size() - 1)];
        const auto& l2 = b[gen::pick(rng, 0, b.size() - 1)];
        const auto& l3 = c[gen::pick(rng, 0, c.size() - 1)];
        EXPECT_EQ(compose_polylens(compose_polylens(l1, l2), l3), compose_polylens(l1, compose_polylens(l2, l3)));
    }
}

TEST(ComposePolyLens, MismatchThrows) {
    EXPECT_THROW(compose_polylens(identity_polylens(y1), identity_polylens(y2)), MismatchError);
}

TEST(Ommatidium, RoundTripThroughCanonicalResidual) {
    for (const auto& [p, q] : std::vector<std::pair<PolyFunctor, PolyFunctor>>{
             {y1, y2}, {y2, y1}, {y2_plus_y, y2}, {y2, y2_plus_y}, {y1, y1}}) {
        for (const auto& l : enumerate_polylenses(p, q)) {
            const auto o = polylens_to_ommatidium(l);
            ASSERT_TRUE(validate_ommatidium(o).ok());
            EXPECT_EQ(ommatidium_to_polylens(o), l);
        }
    }
}

TEST(Ommatidium, ProjectionsStayDistinct) {
    const auto ls = enumerate_polylenses(y2, y1);
    ASSERT_EQ(ls.size(), 2u);
    const auto o0 = polylens_to_ommatidium(ls[0]);
    const auto o1 = polylens_to_ommatidium(ls[1]);
    EXPECT_NE(o0.forward, o1.forward);
    EXPECT_FALSE(same_normal_form(o0, o1));
}

TEST(Ommatidium, IdentityHasHomResidual) {
    const auto o = polylens_to_ommatidium(identity_polylens(y2));
    ASSERT_EQ(o.residual.size(), 1u);
    EXPECT_EQ(o.residual[0][0].size(), 4u);  // Set(t, t) with |t| = 2
    const auto fs = o.forward_set(0);
    auto [n, x, c] = fs.decode(o.forward[0][0]);
    EXPECT_EQ(n, 0u);
    EXPECT_EQ(x, 0u);
    EXPECT_EQ(FunctionSet(y2.directions[0], y2.directions[0]).table(c), identity_table(2));
}

TEST(Ommatidium, EmptyResidualAndEmptySource) {
    const auto s = monomials({{0, 1}});
    Ommatidium o{s, y1, {{FinSet{}}}, {Table{}}, {Table{}}};
    ASSERT_TRUE(validate_ommatidium(o).ok());
    const auto l = ommatidium_to_polylens(o);
    ASSERT_EQ(l.entries.size(), 1u);
    EXPECT_TRUE(l.entries[0].empty());
}

// All residual families with entries of size ≤ max over the given index shape.
std::vector<std::vector<std::vector<FinSet>>> residual_families(std::size_t nn, std::size_t nk, std::size_t max) {
    std::vector<std::vector<std::vector<FinSet>>> out;
    const auto cells = nn * nk;
    std::vector<std::size_t> sizes(cells, 0);
    while (true) {
        std::vector<std::vector<FinSet>> fam(nn, std::vector<FinSet>(nk));
        for (std::size_t i = 0; i < cells; ++i) fam[i / nk][i % nk] = gen::atoms(sizes[i], "c");
        out.push_back(fam);
        std::size_t i = cells;
        while (i > 0) {
            --i;
            if (++sizes[i] <= max) break;
            sizes[i] = 0;
            if (i == 0) return out;
        }
        if (cells == 0) return out;
    }
}

// Every family h[n][k]: c[n][k] -> c2[n][k].
std::vector<std::vector<std::vector<Table>>> all_transports(const std::vector<std::vector<FinSet>>& c,
                                                            const std::vector<std::vector<FinSet>>& c2) {
    std::vector<std::vector<std::vector<Table>>> out{{}};
    for (std::size_t n = 0; n < c.size(); ++n) {
        for (auto& h : out) h.emplace_back();
        for (std::size_t k = 0; k < c[n].size(); ++k) {
            std::vector<std::vector<std::vector<Table>>> next;
            for (const auto& f : all_functions(c[n][k].size(), c2[n][k].size())) {
                for (auto h : out) {
                    h.back().push_back(f);
                    next.push_back(std::move(h));
                }
            }
            out = std::move(next);
        }
    }
    return out;
}

TEST(Ommatidium, NormalFormInvariantUnderAllTransports) {
    std::mt19937 rng(17);
    std::size_t steps = 0;
    for (const auto& [src, tgt] : std::vector<std::pair<PolyFunctor, PolyFunctor>>{
             {y1, y2}, {y2, y1}, {y2_plus_y, y1}, {monomials({{2, 1}}), y2_plus_y}}) {
        const auto nn = tgt.index.size(), nk = src.index.size();
        const auto fams = residual_families(nn, nk, 2);
        for (const auto& c : fams) {
            for (const auto& c2 : fams) {
                for (const auto& h : all_transports(c, c2)) {
                    for (int draw = 0; draw < 4; ++draw) {
                        Ommatidium probe{src, tgt, c, {}, {}}, probe2{src, tgt, c2, {}, {}};
                        std::vector<Table> f, g;
                        bool possible = true;
                        for (std::size_t k = 0; k < nk; ++k) {
                            const auto fs = probe.forward_set(k).size();
                            possible = possible && (fs > 0 || src.positions[k].size() == 0);
                            f.push_back(oracle::random_table(rng, src.positions[k].size(), fs));
                            g.push_back(oracle::random_table(rng, probe2.backward_set(k).size(), src.directions[k].size()));
                        }
                        if (!possible) continue;
                        auto [left, right] = ommatidium_zigzag(src, tgt, c, c2, h, f, g);
                        ASSERT_TRUE(validate_ommatidium(left).ok());
                        ASSERT_TRUE(validate_ommatidium(right).ok());
                        EXPECT_TRUE(ommatidium_related(left, right, h));
                        EXPECT_EQ(ommatidium_to_polylens(left), ommatidium_to_polylens(right));
                        ++steps;
                    }
                }
            }
        }
    }
    EXPECT_GT(steps, 700u);
}

TEST(Ommatidium, RelatedRejectsWrongTransport) {
    const auto ls = enumerate_polylenses(y2, y1);
    const auto o0 = polylens_to_ommatidium(ls[0]);
    const auto o1 = polylens_to_ommatidium(ls[1]);
    std::vector<std::vector<Table>> id{{identity_table(o0.residual[0][0].size())}};
    EXPECT_TRUE(ommatidium_related(o0, o0, id));
    EXPECT_FALSE(ommatidium_related(o0, o1, id));
}

// --- compound optics ---

CompoundOptic from_polylens(const PolyLens& l) { return ommatidium_to_compound(polylens_to_ommatidium(l)); }

TEST(Compound, DiscreteConversionRoundTrip) {
    for (const auto& [p, q] : std::vector<std::pair<PolyFunctor, PolyFunctor>>{{y1, y2}, {y2, y1}, {y2_plus_y, y2}}) {
        for (const auto& l : enumerate_polylenses(p, q)) {
            const auto o = from_polylens(l);
            ASSERT_TRUE(validate_compound(o).ok());
            EXPECT_EQ(compound_normal_form(o, p, q), l);
        }
    }
}

TEST(Compound, DiscreteCompositionMatchesPolyLens) {
    const std::vector<PolyFunctor> polys{y1, y2, y2_plus_y, monomials({{2, 1}})};
    for (const auto& u : polys) {
        for (const auto& s : polys) {
            for (const auto& a : polys) {
                const auto l2s = enumerate_polylenses(u, s);  // optic ⟨s⟩ -> ⟨u⟩
                const auto l1s = enumerate_polylenses(s, a);  // optic ⟨a⟩ -> ⟨s⟩
                for (std::size_t i = 0; i < l1s.size(); i += 1 + l1s.size() / 4) {
                    for (std::size_t j = 0; j < l2s.size(); j += 1 + l2s.size() / 4) {
                        const auto o = compound_compose(from_polylens(l1s[i]), from_polylens(l2s[j]));
                        ASSERT_TRUE(validate_compound(o).ok());
                        EXPECT_EQ(compound_normal_form(o, u, a), compose_polylens(l2s[j], l1s[i]));
                    }
                }
            }
        }
    }
}

TEST(Compound, IdentityIsTwoSidedUnitDiscrete) {
    for (const auto& l : enumerate_polylenses(y2_plus_y, y2)) {
        const auto o = from_polylens(l);
        const auto left = compound_compose(identity_compound(o.a, o.b), o);
        const auto right = compound_compose(o, identity_compound(o.s, o.t));
        EXPECT_EQ(compound_normal_form(left, y2_plus_y, y2), l);
        EXPECT_EQ(compound_normal_form(right, y2_plus_y, y2), l);
        EXPECT_TRUE(coend_witness_check(left, o, unit_prof_nat(o.residual, true)));
        EXPECT_TRUE(coend_witness_check(right, o, unit_prof_nat(o.residual, false)));
    }
}

TEST(Compound, WitnessCheckIdentityIsComponentwiseEquality) {
    const auto ls = enumerate_polylenses(y2, y1);
    const auto o0 = from_polylens(ls[0]);
    const auto o1 = from_polylens(ls[1]);
    EXPECT_TRUE(coend_witness_check(o0, o0, identity_prof_nat(o0.residual)));
    EXPECT_FALSE(coend_witness_check(o0, o1, identity_prof_nat(o0.residual)));
}

TEST(Compound, DiscreteRelatedPairsHaveEqualNormalForms) {
    std::mt19937 rng(23);
    const auto src = y2_plus_y, tgt = y1;
    std::size_t checked = 0;
    const auto fams = residual_families(1, 2, 2);
    for (const auto& c : fams) {
        for (const auto& c2 : fams) {
            for (const auto& h : all_transports(c, c2)) {
                Ommatidium probe{src, tgt, c, {}, {}}, probe2{src, tgt, c2, {}, {}};
                std::vector<Table> f, g;
                bool possible = true;
                for (std::size_t k = 0; k < 2; ++k) {
                    possible = possible && probe.forward_set(k).size() > 0;
                    f.push_back(oracle::random_table(rng, 1, probe.forward_set(k).size()));
                    g.push_back(oracle::random_table(rng, probe2.backward_set(k).size(), src.directions[k].size()));
                }
                if (!possible) continue;
                auto [left, right] = ommatidium_zigzag(src, tgt, c, c2, h, f, g);
                const auto ol = ommatidium_to_compound(left), orr = ommatidium_to_compound(right);
                ProfNat hn{h};
                EXPECT_TRUE(coend_witness_check(ol, orr, hn));
                EXPECT_EQ(compound_normal_form(ol, src, tgt), compound_normal_form(orr, src, tgt));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 50u);
}

TEST(Compound, WrongWitnessIsRejected) {
    // Two optics one zig-zag apart along a swap; the identity 2-cell does not witness it.
    const auto src = y2, tgt = y1;
    const std::vector<std::vector<FinSet>> c{{gen::atoms(2, "c")}};
    const std::vector<std::vector<Table>> swap{{{1, 0}}};
    Ommatidium probe{src, tgt, c, {}, {}};
    const std::vector<Table> f{{probe.forward_set(0).encode(0, 0, 0)}};
    const std::vector<Table> g{{0, 1}};
    auto [left, right] = ommatidium_zigzag(src, tgt, c, c, swap, f, g);
    const auto ol = ommatidium_to_compound(left), orr = ommatidium_to_compound(right);
    EXPECT_TRUE(coend_witness_check(ol, orr, ProfNat{swap}));
    EXPECT_FALSE(coend_witness_check(ol, orr, identity_prof_nat(ol.residual)));
    // A non-natural or ill-typed h is rejected too.
    EXPECT_FALSE(coend_witness_check(ol, orr, ProfNat{{{{0}}}}));
}

TEST(Compound, EndpointMismatchThrows) {
    const auto o1 = from_polylens(enumerate_polylenses(y2, y1).front());
    const auto o2 = from_polylens(enumerate_polylenses(y1, y2).front());
    EXPECT_THROW(compound_compose(o2, o2), MismatchError);
    EXPECT_THROW(coend_witness_check(o1, o2, identity_prof_nat(o1.residual)), MismatchError);
}

// Random compound optics over the walking arrow.
std::optional<CompoundOptic> random_compound(std::mt19937& rng, const FinCategory& n, const FinCategory& k,
                                             const CoPresheaf& a, const CoPresheaf& b, const CoPresheaf& s,
                                             const CoPresheaf& t) {
    for (int attempt = 0; attempt < 40; ++attempt) {
        const auto p = gen::random_profunctor(rng, n, k, 2);
        const auto fw = enumerate_nats(s, prof_action(p, a));
        const auto bw = enumerate_nats(prof_action(p, b), t);
        if (fw.empty() || bw.empty()) continue;
        return CompoundOptic{p, a, b, s, t, fw[gen::pick(rng, 0, fw.size() - 1)], bw[gen::pick(rng, 0, bw.size() - 1)]};
    }
    return std::nullopt;
}

TEST(Compound, NonDiscreteCompositionIsNatural) {
    std::mt19937 rng(29);
    const auto arrow = catalog::walking_arrow();
    std::size_t composed = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = gen::random_copresheaf(rng, arrow, 2), b = gen::random_copresheaf(rng, arrow, 2);
        const auto s = gen::random_copresheaf(rng, arrow, 2), t = gen::random_copresheaf(rng, arrow, 2);
        const auto u = gen::random_copresheaf(rng, arrow, 2), v = gen::random_copresheaf(rng, arrow, 2);
        const auto o1 = random_compound(rng, arrow, arrow, a, b, s, t);
        const auto o2 = random_compound(rng, arrow, arrow, s, t, u, v);
        if (!o1 || !o2) continue;
        ASSERT_TRUE(validate_compound(*o1).ok());
        const auto o = compound_compose(*o1, *o2);
        const auto r = validate_compound(o);
        EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
        // Unit laws, witnessed by the unit 2-cells.
        EXPECT_TRUE(coend_witness_check(compound_compose(identity_compound(a, b), *o1), *o1,
                                        unit_prof_nat(o1->residual, true)));
        EXPECT_TRUE(coend_witness_check(compound_compose(*o1, identity_compound(s, t)), *o1,
                                        unit_prof_nat(o1->residual, false)));
        ++composed;
    }
    EXPECT_GT(composed, 10u);
}

TEST(Compound, NonDiscreteAssociativityWitnessed) {
    std::mt19937 rng(31);
    const auto arrow = catalog::walking_arrow();
    std::size_t checked = 0;
    for (int trial = 0; trial < 30 && checked < 6; ++trial) {
        std::vector<CoPresheaf> ends;
        for (int i = 0; i < 8; ++i) ends.push_back(gen::random_copresheaf(rng, arrow, 2));
        const auto o1 = random_compound(rng, arrow, arrow, ends[0], ends[1], ends[2], ends[3]);
        const auto o2 = random_compound(rng, arrow, arrow, ends[2], ends[3], ends[4], ends[5]);
        const auto o3 = random_compound(rng, arrow, arrow, ends[4], ends[5], ends[6], ends[7]);
        if (!o1 || !o2 || !o3) continue;
        const auto left = compound_compose(compound_compose(*o1, *o2), *o3);
        const auto right = compound_compose(*o1, compound_compose(*o2, *o3));
        const auto assoc = associativity(o1->residual, o2->residual, o3->residual);
        ASSERT_TRUE(assoc.witness);
        ProfNat h;
        const auto nn = arrow.num_objects(), nk = arrow.num_objects();
        for (std::size_t n = 0; n < nn; ++n) {
            h.components.emplace_back();
            for (std::size_t k = 0; k < nk; ++k) h.components.back().push_back(assoc.witness.forward[n * nk + k]);
        }
        EXPECT_TRUE(coend_witness_check(left, right, h));
        ++checked;
    }
    EXPECT_GT(checked, 0u);
}

} // namespace
} // namespace optika
