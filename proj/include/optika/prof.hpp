#pragma once

// Profunctors N^op × K -> Set between finite categories, their composition, and their
// action on co-presheaves.

#include <cstddef>
#include <string>
#include <vector>

#include "optika/coend.hpp"

namespace optika {

// fiber[n][k] is p⟨n,k⟩.
//   contra[f][k]  for f: n -> n' in N maps p⟨n',k⟩ -> p⟨n,k⟩.
//   co[g][n]      for g: k -> k' in K maps p⟨n,k⟩ -> p⟨n,k'⟩.
struct FinProfunctor {
    FinCategory source;
    FinCategory target;
    std::vector<std::vector<FinSet>> fiber;
    std::vector<std::vector<Table>> contra;
    std::vector<std::vector<Table>> co;

    const FinSet& at(std::size_t n, std::size_t k) const { return fiber[n][k]; }

    // p(-, k) as a contravariant family on N.
    SetFamily column(std::size_t k) const {
        SetFamily fam;
        for (std::size_t n = 0; n < source.num_objects(); ++n) fam.fiber.push_back(fiber[n][k]);
        for (std::size_t f = 0; f < source.num_morphisms(); ++f) fam.action.push_back(contra[f][k]);
        return fam;
    }
    // p(n, -) as a covariant family on K.
    SetFamily row(std::size_t n) const {
        SetFamily fam{fiber[n], {}};
        for (std::size_t g = 0; g < target.num_morphisms(); ++g) fam.action.push_back(co[g][n]);
        return fam;
    }
};

inline ValidationReport validate_profunctor(const FinProfunctor& p) {
    ValidationReport r;
    const auto& nc = p.source;
    const auto& kc = p.target;
    const auto nn = nc.num_objects(), nk = kc.num_objects();
    if (p.fiber.size() != nn || p.contra.size() != nc.num_morphisms() || p.co.size() != kc.num_morphisms()) {
        r.add("profunctor tables do not cover the categories");
        return r;
    }
    for (const auto& row : p.fiber) {
        if (row.size() != nk) {
            r.add("profunctor fiber rows do not cover the target");
            return r;
        }
    }
    auto is_fn = [](const Table& t, std::size_t dom, std::size_t cod) {
        if (t.size() != dom) return false;
        for (auto v : t) {
            if (v >= cod) return false;
        }
        return true;
    };
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t k = 0; k < nk; ++k) {
            if (p.contra[f].size() != nk ||
                !is_fn(p.contra[f][k], p.at(nc.tgt(f), k).size(), p.at(nc.src(f), k).size())) {
                r.add("contravariant action of " + nc.morphism(f).id + " at " + kc.object(k) + " is not a function");
                return r;
            }
        }
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t n = 0; n < nn; ++n) {
            if (p.co[g].size() != nn || !is_fn(p.co[g][n], p.at(n, kc.src(g)).size(), p.at(n, kc.tgt(g)).size())) {
                r.add("covariant action of " + kc.morphism(g).id + " at " + nc.object(n) + " is not a function");
                return r;
            }
        }
    }
    for (std::size_t n = 0; n < nn; ++n) {
        for (std::size_t k = 0; k < nk; ++k) {
            if (p.contra[nc.identity(n)][k] != identity_table(p.at(n, k).size()) ||
                p.co[kc.identity(k)][n] != identity_table(p.at(n, k).size())) {
                r.add("identities do not act trivially at <" + nc.object(n) + "," + kc.object(k) + ">");
            }
        }
    }
    for (std::size_t g = 0; g < nc.num_morphisms(); ++g) {
        for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
            const auto gf = nc.compose(g, f);
            if (gf == npos) continue;
            for (std::size_t k = 0; k < nk; ++k) {
                if (p.contra[gf][k] != compose_tables(p.contra[f][k], p.contra[g][k])) {
                    r.add("contravariant action not functorial for " + nc.morphism(g).id + "∘" + nc.morphism(f).id);
                }
            }
        }
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t f = 0; f < kc.num_morphisms(); ++f) {
            const auto gf = kc.compose(g, f);
            if (gf == npos) continue;
            for (std::size_t n = 0; n < nn; ++n) {
                if (p.co[gf][n] != compose_tables(p.co[g][n], p.co[f][n])) {
                    r.add("covariant action not functorial for " + kc.morphism(g).id + "∘" + kc.morphism(f).id);
                }
            }
        }
    }
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
            // p⟨n',k⟩ -> p⟨n,k'⟩ both ways round.
            const auto n = nc.src(f), n2 = nc.tgt(f), k = kc.src(g), k2 = kc.tgt(g);
            if (compose_tables(p.co[g][n], p.contra[f][k]) != compose_tables(p.contra[f][k2], p.co[g][n2])) {
                r.add("actions of " + nc.morphism(f).id + " and " + kc.morphism(g).id + " do not commute");
            }
        }
    }
    return r;
}

// The hom profunctor c(-, -): the unit for composition.
inline FinProfunctor hom_profunctor(const FinCategory& c) {
    const auto n = c.num_objects();
    FinProfunctor p{c, c, std::vector<std::vector<FinSet>>(n), {}, {}};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) p.fiber[a].push_back(c.hom_set(a, b));
    }
    p.contra.assign(c.num_morphisms(), std::vector<Table>(n));
    p.co.assign(c.num_morphisms(), std::vector<Table>(n));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t x = 0; x < n; ++x) {
            for (auto h : c.hom(c.tgt(f), x)) p.contra[f][x].push_back(c.hom_position(c.compose(h, f)));
            for (auto h : c.hom(x, c.src(f))) p.co[f][x].push_back(c.hom_position(c.compose(f, h)));
        }
    }
    return p;
}

// A profunctor between discrete categories with the given fiber sizes; the elements
// of fiber (n, k) are "x0", "x1", ...
inline FinProfunctor matrix_profunctor(const FinCategory& n, const FinCategory& k,
                                       const std::vector<std::vector<std::size_t>>& sizes) {
    if (!n.is_discrete() || !k.is_discrete()) throw ValidationError("matrix_profunctor: categories must be discrete");
    if (sizes.size() != n.num_objects()) throw ValidationError("matrix_profunctor: wrong number of rows");
    FinProfunctor p{n, k, std::vector<std::vector<FinSet>>(n.num_objects()), {}, {}};
    for (std::size_t a = 0; a < n.num_objects(); ++a) {
        if (sizes[a].size() != k.num_objects()) throw ValidationError("matrix_profunctor: wrong number of columns");
        for (std::size_t b = 0; b < k.num_objects(); ++b) {
            std::vector<Atom> xs;
            for (std::size_t i = 0; i < sizes[a][b]; ++i) xs.push_back("x" + std::to_string(i));
            p.fiber[a].emplace_back(std::move(xs));
        }
    }
    p.contra.assign(n.num_objects(), std::vector<Table>(k.num_objects()));
    for (std::size_t a = 0; a < n.num_objects(); ++a) {
        for (std::size_t b = 0; b < k.num_objects(); ++b) p.contra[n.identity(a)][b] = identity_table(sizes[a][b]);
    }
    p.co.assign(k.num_objects(), std::vector<Table>(n.num_objects()));
    for (std::size_t b = 0; b < k.num_objects(); ++b) {
        for (std::size_t a = 0; a < n.num_objects(); ++a) p.co[k.identity(b)][a] = identity_table(sizes[a][b]);
    }
    return p;
}

// K(P n, k) for P: N -> K.
inline FinProfunctor representable_profunctor(const FinFunctor& p) {
    const auto& nc = p.source;
    const auto& kc = p.target;
    FinProfunctor r{nc, kc, std::vector<std::vector<FinSet>>(nc.num_objects()), {}, {}};
    for (std::size_t a = 0; a < nc.num_objects(); ++a) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) r.fiber[a].push_back(kc.hom_set(p.obj_map[a], b));
    }
    r.contra.assign(nc.num_morphisms(), std::vector<Table>(kc.num_objects()));
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) {
            for (auto h : kc.hom(p.obj_map[nc.tgt(f)], b)) {
                r.contra[f][b].push_back(kc.hom_position(kc.compose(h, p.mor_map[f])));
            }
        }
    }
    r.co.assign(kc.num_morphisms(), std::vector<Table>(nc.num_objects()));
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t a = 0; a < nc.num_objects(); ++a) {
            for (auto h : kc.hom(p.obj_map[a], kc.src(g))) r.co[g][a].push_back(kc.hom_position(kc.compose(g, h)));
        }
    }
    return r;
}

// p ⋄ q for p: N ⇸ M and q: M ⇸ K. The fiber at (n, k) is ∫^m q⟨m,k⟩ × p⟨n,m⟩; its
// integrand and quotient are kept so that witnesses can be built from members.
struct ComposedProfunctor {
    FinProfunctor result;
    std::vector<ProductIntegrand> integrands;  // [n * |K| + k], elements <q-elem, p-elem>
    std::vector<QuotientSet> quotients;

    const ProductIntegrand& integrand(std::size_t n, std::size_t k) const {
        return integrands[n * result.target.num_objects() + k];
    }
    const QuotientSet& quotient(std::size_t n, std::size_t k) const {
        return quotients[n * result.target.num_objects() + k];
    }
};

inline ComposedProfunctor prof_compose_full(const FinProfunctor& p, const FinProfunctor& q) {
    if (!(p.target == q.source)) throw MismatchError("prof_compose: inner categories differ");
    const auto& nc = p.source;
    const auto& mc = p.target;
    const auto& kc = q.target;
    ComposedProfunctor out;
    out.result.source = nc;
    out.result.target = kc;
    out.result.fiber.assign(nc.num_objects(), {});
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            out.integrands.push_back(external_product(mc, q.column(k), p.row(n)));
            out.quotients.push_back(coend(out.integrands.back().bifunctor));
            out.result.fiber[n].push_back(out.quotients.back().carrier);
        }
    }
    out.result.contra.assign(nc.num_morphisms(), std::vector<Table>(kc.num_objects()));
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        const auto n = nc.src(f), n2 = nc.tgt(f);
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            const auto& from = out.integrand(n2, k);
            const auto& to = out.integrand(n, k);
            const auto& to_q = out.quotient(n, k);
            out.result.contra[f][k] = induced_map_or_throw(
                out.quotient(n2, k),
                [&](std::size_t m, std::size_t e) {
                    auto [y, x] = from.at(m, m).decode_pair(e);
                    return to_q.inject[m][to.at(m, m).encode(y, p.contra[f][m][x])];
                },
                "prof_compose contravariant action");
        }
    }
    out.result.co.assign(kc.num_morphisms(), std::vector<Table>(nc.num_objects()));
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        const auto k = kc.src(g), k2 = kc.tgt(g);
        for (std::size_t n = 0; n < nc.num_objects(); ++n) {
            const auto& from = out.integrand(n, k);
            const auto& to = out.integrand(n, k2);
            const auto& to_q = out.quotient(n, k2);
            out.result.co[g][n] = induced_map_or_throw(
                out.quotient(n, k),
                [&](std::size_t m, std::size_t e) {
                    auto [y, x] = from.at(m, m).decode_pair(e);
                    return to_q.inject[m][to.at(m, m).encode(q.co[g][m][y], x)];
                },
                "prof_compose covariant action");
        }
    }
    return out;
}

inline FinProfunctor prof_compose(const FinProfunctor& p, const FinProfunctor& q) {
    return prof_compose_full(p, q).result;
}

// p • a for p: N ⇸ K and a on N: the co-presheaf k ↦ ∫^n p⟨n,k⟩ × a(n).
struct ActionResult {
    CoPresheaf result;
    std::vector<ProductIntegrand> integrands;  // [k], elements <p-elem, a-elem>
    std::vector<QuotientSet> quotients;        // [k]
};

inline ActionResult prof_action_full(const FinProfunctor& p, const CoPresheaf& a) {
    if (!(a.base == p.source)) throw MismatchError("prof_action: co-presheaf base is not the profunctor source");
    const auto& kc = p.target;
    ActionResult out;
    out.result.base = kc;
    for (std::size_t k = 0; k < kc.num_objects(); ++k) {
        out.integrands.push_back(external_product(p.source, p.column(k), family_of(a)));
        out.quotients.push_back(coend(out.integrands.back().bifunctor));
        out.result.fiber.push_back(out.quotients.back().carrier);
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        const auto k = kc.src(g), k2 = kc.tgt(g);
        const auto& from = out.integrands[k];
        const auto& to = out.integrands[k2];
        out.result.action.push_back(induced_map_or_throw(
            out.quotients[k],
            [&](std::size_t n, std::size_t e) {
                auto [x, al] = from.at(n, n).decode_pair(e);
                return out.quotients[k2].inject[n][to.at(n, n).encode(p.co[g][n][x], al)];
            },
            "prof_action covariant action"));
    }
    return out;
}

inline CoPresheaf prof_action(const FinProfunctor& p, const CoPresheaf& a) { return prof_action_full(p, a).result; }

// p • eta : p • a ⇒ p • a' for eta: a ⇒ a'.
inline NatTransformation act_on_nat(const FinProfunctor& p, const CoPresheaf& a, const CoPresheaf& a2,
                                    const NatTransformation& eta) {
    const auto pa = prof_action_full(p, a);
    const auto pa2 = prof_action_full(p, a2);
    NatTransformation out;
    for (std::size_t k = 0; k < p.target.num_objects(); ++k) {
        out.components.push_back(induced_map_or_throw(
            pa.quotients[k],
            [&](std::size_t n, std::size_t e) {
                auto [x, al] = pa.integrands[k].at(n, n).decode_pair(e);
                return pa2.quotients[k].inject[n][pa2.integrands[k].at(n, n).encode(x, eta.components[n][al])];
            },
            "act_on_nat"));
    }
    return out;
}

// Marks a verified witness as failed unless its forward components form a natural
// transformation lhs ⇒ rhs.
inline void require_natural(IsoWitness& w, const CoPresheaf& lhs, const CoPresheaf& rhs) {
    if (!w.verified) return;
    const auto r = validate_nat(lhs, rhs, NatTransformation{w.forward});
    if (!r.ok()) {
        w.verified = false;
        w.detail = "not natural: " + r.violations.front();
    }
}

// A class-level map whose value is computed on every member of every inner class
// reached from a member of the outer class: `inner_value` returns npos on disagreement.
template <class Fn>
std::size_t agree_over(const std::vector<ClassMember>& members, Fn&& value) {
    std::size_t v = npos;
    for (const auto& mem : members) {
        const auto w = value(mem);
        if (w == npos || (v != npos && v != w)) return npos;
        v = w;
    }
    return v;
}

// (p ⋄ q) • a ≅ q • (p • a) for p: N ⇸ M, q: M ⇸ K, a on N. Components indexed by k.
//   [n | <[m | <y, x>], α>]  ↦  [m | <y, [n | <x, α>]>]
struct ActionComposition {
    ComposedProfunctor pq;
    ActionResult lhs;    // (p ⋄ q) • a
    ActionResult inner;  // p • a
    ActionResult rhs;    // q • (p • a)
    IsoWitness witness;
};

inline ActionComposition action_composition(const FinProfunctor& p, const FinProfunctor& q, const CoPresheaf& a) {
    ActionComposition res;
    res.pq = prof_compose_full(p, q);
    res.lhs = prof_action_full(res.pq.result, a);
    res.inner = prof_action_full(p, a);
    res.rhs = prof_action_full(q, res.inner.result);
    const auto nk = q.target.num_objects();
    std::vector<Table> fwd, bwd;
    std::vector<std::size_t> dom, cod;
    std::string why;
    for (std::size_t k = 0; k < nk; ++k) {
        const auto& li = res.lhs.integrands[k];
        const auto& ri = res.rhs.integrands[k];
        auto f = induced_map(
            res.lhs.quotients[k],
            [&](std::size_t n, std::size_t e) {
                auto [cls, al] = li.at(n, n).decode_pair(e);
                const auto& pqi = res.pq.integrand(n, k);
                return agree_over(res.pq.quotient(n, k).classes[cls], [&](const ClassMember& mm) {
                    const auto m = mm.object;
                    auto [y, x] = pqi.at(m, m).decode_pair(mm.element);
                    const auto pa_cls = res.inner.quotients[m].inject[n][res.inner.integrands[m].at(n, n).encode(x, al)];
                    return res.rhs.quotients[k].inject[m][ri.at(m, m).encode(y, pa_cls)];
                });
            },
            &why);
        auto b = f ? induced_map(
                         res.rhs.quotients[k],
                         [&](std::size_t m, std::size_t e) {
                             auto [y, pa_cls] = ri.at(m, m).decode_pair(e);
                             const auto& ai = res.inner.integrands[m];
                             return agree_over(res.inner.quotients[m].classes[pa_cls], [&](const ClassMember& nm) {
                                 const auto n = nm.object;
                                 auto [x, al] = ai.at(n, n).decode_pair(nm.element);
                                 const auto pq_cls = res.pq.quotient(n, k).inject[m][res.pq.integrand(n, k).at(m, m).encode(y, x)];
                                 return res.lhs.quotients[k].inject[n][li.at(n, n).encode(pq_cls, al)];
                             });
                         },
                         &why)
                   : std::nullopt;
        if (!b) {
            res.witness = failed_witness("component " + q.target.object(k) + ": " + why);
            return res;
        }
        fwd.push_back(*f);
        bwd.push_back(*b);
        dom.push_back(res.lhs.quotients[k].size());
        cod.push_back(res.rhs.quotients[k].size());
    }
    res.witness = make_witness(std::move(fwd), std::move(bwd), dom, cod);
    require_natural(res.witness, res.lhs.result, res.rhs.result);
    return res;
}

inline IsoWitness action_composition_check(const FinProfunctor& p, const FinProfunctor& q, const CoPresheaf& a) {
    return action_composition(p, q, a).witness;
}

// Components indexed by (n, k), n-major; the left unit hom ⋄ p ≅ p comes first, then
// the right unit p ⋄ hom ≅ p.
inline IsoWitness unit_check(const FinProfunctor& p) {
    const auto& nc = p.source;
    const auto& kc = p.target;
    const auto left = prof_compose_full(hom_profunctor(nc), p);
    const auto right = prof_compose_full(p, hom_profunctor(kc));
    std::vector<Table> fwd, bwd;
    std::vector<std::size_t> dom, cod;
    std::string why;
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            // ∫^m p⟨m,k⟩ × N(n,m) -> p⟨n,k⟩, (y, h) ↦ p(h, k)(y).
            const auto& li = left.integrand(n, k);
            auto f = induced_map(
                left.quotient(n, k),
                [&](std::size_t m, std::size_t e) {
                    auto [y, h] = li.at(m, m).decode_pair(e);
                    return p.contra[nc.hom(n, m)[h]][k][y];
                },
                &why);
            if (!f) return failed_witness("left unit at <" + nc.object(n) + "," + kc.object(k) + ">: " + why);
            Table b(p.at(n, k).size());
            const auto id = nc.hom_position(nc.identity(n));
            for (std::size_t y = 0; y < b.size(); ++y) b[y] = left.quotient(n, k).inject[n][li.at(n, n).encode(y, id)];
            fwd.push_back(*f);
            bwd.push_back(b);
            dom.push_back(left.quotient(n, k).size());
            cod.push_back(p.at(n, k).size());
        }
    }
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            // ∫^m K(m,k) × p⟨n,m⟩ -> p⟨n,k⟩, (g, x) ↦ p(n, g)(x).
            const auto& ri = right.integrand(n, k);
            auto f = induced_map(
                right.quotient(n, k),
                [&](std::size_t m, std::size_t e) {
                    auto [g, x] = ri.at(m, m).decode_pair(e);
                    return p.co[kc.hom(m, k)[g]][n][x];
                },
                &why);
            if (!f) return failed_witness("right unit at <" + nc.object(n) + "," + kc.object(k) + ">: " + why);
            Table b(p.at(n, k).size());
            const auto id = kc.hom_position(kc.identity(k));
            for (std::size_t x = 0; x < b.size(); ++x) b[x] = right.quotient(n, k).inject[k][ri.at(k, k).encode(id, x)];
            fwd.push_back(*f);
            bwd.push_back(b);
            dom.push_back(right.quotient(n, k).size());
            cod.push_back(p.at(n, k).size());
        }
    }
    return make_witness(std::move(fwd), std::move(bwd), dom, cod);
}

// hom • a ≅ a, components indexed by objects.
inline IsoWitness action_unit_check(const CoPresheaf& a) {
    const auto& c = a.base;
    const auto act = prof_action_full(hom_profunctor(c), a);
    std::vector<Table> fwd, bwd;
    std::vector<std::size_t> dom, cod;
    std::string why;
    for (std::size_t k = 0; k < c.num_objects(); ++k) {
        const auto& in = act.integrands[k];
        auto f = induced_map(
            act.quotients[k],
            [&](std::size_t n, std::size_t e) {
                auto [h, al] = in.at(n, n).decode_pair(e);
                return a.action[c.hom(n, k)[h]][al];
            },
            &why);
        if (!f) return failed_witness("at " + c.object(k) + ": " + why);
        Table b(a.fiber[k].size());
        const auto id = c.hom_position(c.identity(k));
        for (std::size_t al = 0; al < b.size(); ++al) b[al] = act.quotients[k].inject[k][in.at(k, k).encode(id, al)];
        fwd.push_back(*f);
        bwd.push_back(b);
        dom.push_back(act.quotients[k].size());
        cod.push_back(a.fiber[k].size());
    }
    auto w = make_witness(std::move(fwd), std::move(bwd), dom, cod);
    require_natural(w, act.result, a);
    return w;
}

// (p ⋄ q) ⋄ r ≅ p ⋄ (q ⋄ r) for p: N ⇸ M, q: M ⇸ L, r: L ⇸ K. Both sides are
// identified with the single coend over M × L of
//   (<m⁻,l⁻>, <m⁺,l⁺>) ↦ r⟨l⁻,k⟩ × q⟨m⁻,l⁺⟩ × p⟨n,m⁺⟩
// and the witness is the composite of those two identifications.
struct AssociativityResult {
    ComposedProfunctor pq, qr, left, right;  // left = (p⋄q)⋄r, right = p⋄(q⋄r)
    std::vector<QuotientSet> single;         // [n * |K| + k]
    IsoWitness to_single;                    // left -> single
    IsoWitness from_single;                  // single -> right
    IsoWitness witness;                      // left -> right
};

inline FinBifunctor triple_integrand(const FinProfunctor& p, const FinProfunctor& q, const FinProfunctor& r,
                                     std::size_t n, std::size_t k, std::vector<TupleSet>* tuples) {
    const auto& mc = p.target;
    const auto& lc = q.target;
    FinBifunctor d;
    d.base = product_category(mc, lc);
    const ProductIndex ix{&mc, &lc, &d.base};
    const auto no = d.base.num_objects();
    d.fiber.assign(no, std::vector<FinSet>(no));
    std::vector<TupleSet> ts(no * no);
    for (std::size_t m = 0; m < mc.num_objects(); ++m) {
        for (std::size_t l = 0; l < lc.num_objects(); ++l) {
            for (std::size_t m2 = 0; m2 < mc.num_objects(); ++m2) {
                for (std::size_t l2 = 0; l2 < lc.num_objects(); ++l2) {
                    const auto a = ix.object(m, l), b = ix.object(m2, l2);
                    ts[a * no + b] = TupleSet(std::vector<FinSet>{r.at(l, k), q.at(m, l2), p.at(n, m2)});
                    d.fiber[a][b] = ts[a * no + b].set();
                }
            }
        }
    }
    d.left.assign(d.base.num_morphisms(), std::vector<Table>(no));
    d.right.assign(d.base.num_morphisms(), std::vector<Table>(no));
    for (std::size_t f = 0; f < mc.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < lc.num_morphisms(); ++g) {
            const auto fg = ix.morphism(f, g);
            const auto src = ix.object(mc.src(f), lc.src(g));
            const auto tgt = ix.object(mc.tgt(f), lc.tgt(g));
            for (std::size_t mx = 0; mx < mc.num_objects(); ++mx) {
                for (std::size_t lx = 0; lx < lc.num_objects(); ++lx) {
                    const auto xo = ix.object(mx, lx);
                    const auto& lf = ts[tgt * no + xo];
                    const auto& lt = ts[src * no + xo];
                    Table lt_tab(lf.size());
                    for (std::size_t e = 0; e < lf.size(); ++e) {
                        auto v = lf.decode(e);
                        const std::size_t out[3] = {r.contra[g][k][v[0]], q.contra[f][lx][v[1]], v[2]};
                        lt_tab[e] = lt.encode(out);
                    }
                    d.left[fg][xo] = std::move(lt_tab);
                    const auto& rf = ts[xo * no + src];
                    const auto& rt = ts[xo * no + tgt];
                    Table rt_tab(rf.size());
                    for (std::size_t e = 0; e < rf.size(); ++e) {
                        auto v = rf.decode(e);
                        const std::size_t out[3] = {v[0], q.co[g][mx][v[1]], p.co[f][n][v[2]]};
                        rt_tab[e] = rt.encode(out);
                    }
                    d.right[fg][xo] = std::move(rt_tab);
                }
            }
        }
    }
    if (tuples) *tuples = std::move(ts);
    return d;
}

inline AssociativityResult associativity(const FinProfunctor& p, const FinProfunctor& q, const FinProfunctor& r) {
    AssociativityResult res;
    res.pq = prof_compose_full(p, q);
    res.qr = prof_compose_full(q, r);
    res.left = prof_compose_full(res.pq.result, r);
    res.right = prof_compose_full(p, res.qr.result);
    const auto& nc = p.source;
    const auto& mc = p.target;
    const auto& lc = q.target;
    const auto& kc = r.target;
    std::vector<Table> f1, b1, f2, b2, f, b;
    std::vector<std::size_t> ls, ss, rs;
    std::string why;
    auto fail = [&](std::string msg) {
        res.witness = failed_witness(std::move(msg));
        return res;
    };
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            std::vector<TupleSet> ts;
            const auto big = triple_integrand(p, q, r, n, k, &ts);
            const ProductIndex ix{&mc, &lc, &big.base};
            const auto no = big.base.num_objects();
            res.single.push_back(coend(big));
            const auto& single = res.single.back();
            auto in_single = [&](std::size_t m, std::size_t l, std::size_t z, std::size_t y, std::size_t x) {
                const auto o = ix.object(m, l);
                const std::size_t v[3] = {z, y, x};
                return single.inject[o][ts[o * no + o].encode(v)];
            };
            // left: [l | <z, [m | <y, x>]>]
            const auto& li = res.left.integrand(n, k);
            auto lf = induced_map(
                res.left.quotient(n, k),
                [&](std::size_t l, std::size_t e) {
                    auto [z, cls] = li.at(l, l).decode_pair(e);
                    const auto& pqi = res.pq.integrand(n, l);
                    return agree_over(res.pq.quotient(n, l).classes[cls], [&](const ClassMember& mm) {
                        auto [y, x] = pqi.at(mm.object, mm.object).decode_pair(mm.element);
                        return in_single(mm.object, l, z, y, x);
                    });
                },
                &why);
            if (!lf) return fail("left side at <" + nc.object(n) + "," + kc.object(k) + ">: " + why);
            // right: [m | <[l | <z, y>], x>]
            const auto& ri = res.right.integrand(n, k);
            auto rf = induced_map(
                res.right.quotient(n, k),
                [&](std::size_t m, std::size_t e) {
                    auto [cls, x] = ri.at(m, m).decode_pair(e);
                    const auto& qri = res.qr.integrand(m, k);
                    return agree_over(res.qr.quotient(m, k).classes[cls], [&](const ClassMember& lm) {
                        auto [z, y] = qri.at(lm.object, lm.object).decode_pair(lm.element);
                        return in_single(m, lm.object, z, y, x);
                    });
                },
                &why);
            if (!rf) return fail("right side at <" + nc.object(n) + "," + kc.object(k) + ">: " + why);
            // single -> left and single -> right, from members <m,l> | (z, y, x).
            std::vector<std::pair<std::size_t, std::size_t>> coords(no);
            for (std::size_t m = 0; m < mc.num_objects(); ++m) {
                for (std::size_t l = 0; l < lc.num_objects(); ++l) coords[ix.object(m, l)] = {m, l};
            }
            auto sl = induced_map(
                single,
                [&](std::size_t o, std::size_t e) {
                    const auto [m, l] = coords[o];
                    const auto v = ts[o * no + o].decode(e);
                    const auto pq_cls = res.pq.quotient(n, l).inject[m][res.pq.integrand(n, l).at(m, m).encode(v[1], v[2])];
                    return res.left.quotient(n, k).inject[l][li.at(l, l).encode(v[0], pq_cls)];
                },
                &why);
            auto sr = sl ? induced_map(
                               single,
                               [&](std::size_t o, std::size_t e) {
                                   const auto [m, l] = coords[o];
                                   const auto v = ts[o * no + o].decode(e);
                                   const auto qr_cls = res.qr.quotient(m, k).inject[l][res.qr.integrand(m, k).at(l, l).encode(v[0], v[1])];
                                   return res.right.quotient(n, k).inject[m][ri.at(m, m).encode(qr_cls, v[2])];
                               },
                               &why)
                         : std::nullopt;
            if (!sr) return fail("single coend at <" + nc.object(n) + "," + kc.object(k) + ">: " + why);
            f1.push_back(*lf);
            b1.push_back(*sl);
            f2.push_back(*sr);
            b2.push_back(*rf);
            f.push_back(compose_tables(*sr, *lf));
            b.push_back(compose_tables(*sl, *rf));
            ls.push_back(res.left.quotient(n, k).size());
            ss.push_back(single.size());
            rs.push_back(res.right.quotient(n, k).size());
        }
    }
    res.to_single = make_witness(std::move(f1), std::move(b1), ls, ss);
    res.from_single = make_witness(std::move(f2), std::move(b2), ss, rs);
    res.witness = make_witness(std::move(f), std::move(b), ls, rs);
    if (!res.to_single.verified) res.witness = failed_witness("left side vs single coend: " + res.to_single.detail);
    if (!res.from_single.verified) res.witness = failed_witness("single coend vs right side: " + res.from_single.detail);
    return res;
}

inline IsoWitness associativity_check(const FinProfunctor& p, const FinProfunctor& q, const FinProfunctor& r) {
    return associativity(p, q, r).witness;
}

// A 2-cell p ⇒ p' between parallel profunctors; components[n][k]: p⟨n,k⟩ -> p'⟨n,k⟩.
struct ProfNat {
    std::vector<std::vector<Table>> components;

    friend bool operator==(const ProfNat&, const ProfNat&) = default;
};

inline ValidationReport validate_prof_nat(const FinProfunctor& p, const FinProfunctor& p2, const ProfNat& h) {
    ValidationReport r;
    if (!(p.source == p2.source) || !(p.target == p2.target)) {
        r.add("2-cell between profunctors of different type");
        return r;
    }
    const auto& nc = p.source;
    const auto& kc = p.target;
    if (h.components.size() != nc.num_objects()) {
        r.add("wrong number of components");
        return r;
    }
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            bool ok = h.components[n].size() == kc.num_objects() && h.components[n][k].size() == p.at(n, k).size();
            if (ok) {
                for (auto v : h.components[n][k]) ok = ok && v < p2.at(n, k).size();
            }
            if (!ok) {
                r.add("component at <" + nc.object(n) + "," + kc.object(k) + "> is not a function");
                return r;
            }
        }
    }
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t k = 0; k < kc.num_objects(); ++k) {
            const auto n = nc.src(f), n2 = nc.tgt(f);
            if (compose_tables(h.components[n][k], p.contra[f][k]) != compose_tables(p2.contra[f][k], h.components[n2][k])) {
                r.add("not natural in the source at " + nc.morphism(f).id);
            }
        }
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t n = 0; n < nc.num_objects(); ++n) {
            const auto k = kc.src(g), k2 = kc.tgt(g);
            if (compose_tables(h.components[n][k2], p.co[g][n]) != compose_tables(p2.co[g][n], h.components[n][k])) {
                r.add("not natural in the target at " + kc.morphism(g).id);
            }
        }
    }
    return r;
}

inline ProfNat identity_prof_nat(const FinProfunctor& p) {
    ProfNat h;
    for (const auto& row : p.fiber) {
        h.components.emplace_back();
        for (const auto& s : row) h.components.back().push_back(identity_table(s.size()));
    }
    return h;
}

// h • a : p • a ⇒ p' • a.
inline NatTransformation act_on_prof_nat(const FinProfunctor& p, const FinProfunctor& p2, const ProfNat& h,
                                         const CoPresheaf& a) {
    const auto pa = prof_action_full(p, a);
    const auto pa2 = prof_action_full(p2, a);
    NatTransformation out;
    for (std::size_t k = 0; k < p.target.num_objects(); ++k) {
        out.components.push_back(induced_map_or_throw(
            pa.quotients[k],
            [&](std::size_t n, std::size_t e) {
                auto [x, al] = pa.integrands[k].at(n, n).decode_pair(e);
                return pa2.quotients[k].inject[n][pa2.integrands[k].at(n, n).encode(h.components[n][k][x], al)];
            },
            "act_on_prof_nat"));
    }
    return out;
}

} // namespace optika
