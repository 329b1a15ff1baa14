#pragma once

// Pointwise left Kan extensions by the coend formula, and the profunctors Π_P.

#include <cstddef>
#include <string>
#include <vector>

#include "optika/coend.hpp"
#include "optika/prof.hpp"

namespace optika {

// b(P -, y) as a contravariant family on the source of P; action is pre-composition
// with the image of the morphism.
inline SetFamily hom_from_image(const FinFunctor& p, std::size_t y) {
    const auto& c = p.source;
    const auto& b = p.target;
    SetFamily fam;
    for (std::size_t x = 0; x < c.num_objects(); ++x) fam.fiber.push_back(b.hom_set(p.obj_map[x], y));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        Table t;
        for (auto h : b.hom(p.obj_map[c.tgt(f)], y)) t.push_back(b.hom_position(b.compose(h, p.mor_map[f])));
        fam.action.push_back(std::move(t));
    }
    return fam;
}

// Lan_P F. fibers[b] is ∫^c B(P c, b) × F c, with elements <h, x> of the integrand.
struct LanResult {
    CoPresheaf copresheaf;
    std::vector<ProductIntegrand> integrands;  // [b]
    std::vector<QuotientSet> fibers;           // [b]
};

inline LanResult left_kan(const CoPresheaf& f, const FinFunctor& p) {
    if (!(f.base == p.source)) throw MismatchError("left_kan: co-presheaf base is not the functor source");
    const auto& c = p.source;
    const auto& b = p.target;
    LanResult res;
    res.copresheaf.base = b;
    for (std::size_t y = 0; y < b.num_objects(); ++y) {
        res.integrands.push_back(external_product(c, hom_from_image(p, y), family_of(f)));
        res.fibers.push_back(coend(res.integrands.back().bifunctor));
        res.copresheaf.fiber.push_back(res.fibers.back().carrier);
    }
    for (std::size_t g = 0; g < b.num_morphisms(); ++g) {
        const auto y = b.src(g), y2 = b.tgt(g);
        const auto& from = res.integrands[y];
        const auto& to = res.integrands[y2];
        res.copresheaf.action.push_back(induced_map_or_throw(
            res.fibers[y],
            [&](std::size_t x, std::size_t e) {
                auto [h, el] = from.at(x, x).decode_pair(e);
                const auto px = p.obj_map[x];
                const auto gh = b.hom_position(b.compose(g, b.hom(px, y)[h]));
                return res.fibers[y2].inject[x][to.at(x, x).encode(gh, el)];
            },
            "left_kan action"));
    }
    return res;
}

// Lan_{Q∘P} F ≅ Lan_Q (Lan_P F), components indexed by objects of the final category.
//   [c | <h, x>]  ↦  [P c | <h, [c | <id, x>]>]
//   [b | <k, [c | <h, x>]>]  ↦  [c | <k ∘ Q h, x>]
struct KanComposition {
    LanResult along_composite;  // Lan_{Q∘P} F
    LanResult inner;            // Lan_P F
    LanResult outer;            // Lan_Q (Lan_P F)
    IsoWitness witness;
};

inline KanComposition kan_composition(const CoPresheaf& f, const FinFunctor& p, const FinFunctor& q) {
    KanComposition res;
    const auto qp = compose_functors(p, q);
    res.along_composite = left_kan(f, qp);
    res.inner = left_kan(f, p);
    res.outer = left_kan(res.inner.copresheaf, q);
    const auto& bc = p.target;
    const auto& ec = q.target;
    std::vector<Table> fwd, bwd;
    std::vector<std::size_t> dom, cod;
    std::string why;
    for (std::size_t e = 0; e < ec.num_objects(); ++e) {
        const auto& li = res.along_composite.integrands[e];
        const auto& ri = res.outer.integrands[e];
        auto fw = induced_map(
            res.along_composite.fibers[e],
            [&](std::size_t c, std::size_t el) {
                auto [h, x] = li.at(c, c).decode_pair(el);
                const auto pc = p.obj_map[c];
                const auto id = bc.hom_position(bc.identity(pc));
                const auto inner_cls = res.inner.fibers[pc].inject[c][res.inner.integrands[pc].at(c, c).encode(id, x)];
                return res.outer.fibers[e].inject[pc][ri.at(pc, pc).encode(h, inner_cls)];
            },
            &why);
        auto bw = fw ? induced_map(
                           res.outer.fibers[e],
                           [&](std::size_t b, std::size_t el) {
                               auto [k, inner_cls] = ri.at(b, b).decode_pair(el);
                               const auto km = ec.hom(q.obj_map[b], e)[k];
                               const auto& ii = res.inner.integrands[b];
                               return agree_over(res.inner.fibers[b].classes[inner_cls], [&](const ClassMember& cm) {
                                   const auto c = cm.object;
                                   auto [h, x] = ii.at(c, c).decode_pair(cm.element);
                                   const auto hm = bc.hom(p.obj_map[c], b)[h];
                                   const auto kqh = ec.hom_position(ec.compose(km, q.mor_map[hm]));
                                   return res.along_composite.fibers[e].inject[c][li.at(c, c).encode(kqh, x)];
                               });
                           },
                           &why)
                     : std::nullopt;
        if (!bw) {
            res.witness = failed_witness("at " + ec.object(e) + ": " + why);
            return res;
        }
        fwd.push_back(*fw);
        bwd.push_back(*bw);
        dom.push_back(res.along_composite.fibers[e].size());
        cod.push_back(res.outer.fibers[e].size());
    }
    res.witness = make_witness(std::move(fwd), std::move(bwd), dom, cod);
    require_natural(res.witness, res.along_composite.copresheaf, res.outer.copresheaf);
    return res;
}

inline IsoWitness kan_composition_check(const CoPresheaf& f, const FinFunctor& p, const FinFunctor& q) {
    return kan_composition(f, p, q).witness;
}

// Π_P(c, d) = (Lan_P 𝒴_c)(d) for P: C -> D. Members of the class at (c, d) are
// (c', <h, k>) with h ∈ D(P c', d) and k ∈ C(c, c'). All entries are computed up front.
struct PiProfunctor {
    FinFunctor functor;
    std::vector<LanResult> lans;  // [c]
    FinProfunctor profunctor;     // C ⇸ D

    const QuotientSet& entry(std::size_t c, std::size_t d) const { return lans[c].fibers[d]; }
    const ProductIntegrand& integrand(std::size_t c, std::size_t d) const { return lans[c].integrands[d]; }
};

inline PiProfunctor pi_profunctor(const FinFunctor& p) {
    const auto& cc = p.source;
    const auto& dc = p.target;
    PiProfunctor pi{p, {}, {}};
    for (std::size_t c = 0; c < cc.num_objects(); ++c) pi.lans.push_back(left_kan(yoneda(cc, c), p));
    auto& pr = pi.profunctor;
    pr.source = cc;
    pr.target = dc;
    pr.fiber.assign(cc.num_objects(), {});
    for (std::size_t c = 0; c < cc.num_objects(); ++c) pr.fiber[c] = pi.lans[c].copresheaf.fiber;
    pr.co.assign(dc.num_morphisms(), std::vector<Table>(cc.num_objects()));
    for (std::size_t g = 0; g < dc.num_morphisms(); ++g) {
        for (std::size_t c = 0; c < cc.num_objects(); ++c) pr.co[g][c] = pi.lans[c].copresheaf.action[g];
    }
    // f: c0 -> c acts by k ↦ k ∘ f.
    pr.contra.assign(cc.num_morphisms(), std::vector<Table>(dc.num_objects()));
    for (std::size_t f = 0; f < cc.num_morphisms(); ++f) {
        const auto c0 = cc.src(f), c = cc.tgt(f);
        for (std::size_t d = 0; d < dc.num_objects(); ++d) {
            const auto& from = pi.integrand(c, d);
            const auto& to = pi.integrand(c0, d);
            pr.contra[f][d] = induced_map_or_throw(
                pi.entry(c, d),
                [&](std::size_t c1, std::size_t e) {
                    auto [h, k] = from.at(c1, c1).decode_pair(e);
                    const auto kf = cc.hom_position(cc.compose(cc.hom(c, c1)[k], f));
                    return pi.entry(c0, d).inject[c1][to.at(c1, c1).encode(h, kf)];
                },
                "pi contravariant action");
        }
    }
    return pi;
}

inline FinSet pi(const FinFunctor& p, std::size_t c, std::size_t d) {
    return left_kan(yoneda(p.source, c), p).copresheaf.fiber.at(d);
}

// The class of (c1, <h, k>) in Π_P(c, d), given morphism indices.
inline std::size_t pi_class(const PiProfunctor& pi, std::size_t c, std::size_t d, std::size_t c1, std::size_t h,
                            std::size_t k) {
    const auto& cc = pi.functor.source;
    const auto& dc = pi.functor.target;
    const auto e = pi.integrand(c, d).at(c1, c1).encode(dc.hom_position(h), cc.hom_position(k));
    return pi.entry(c, d).inject[c1][e];
}

// The class in Π_{Q∘P}(c, e) of the composite of members x ∈ Π_P(c, d), y ∈ Π_Q(d, e):
// for x = (c1, <h, k>) and y = (d1, <h2, k2>) it is (c1, <h2 ∘ Q(k2 ∘ h), k>).
inline std::size_t pi_compose_members(const PiProfunctor& pp, const PiProfunctor& pq, const PiProfunctor& pqp,
                                      std::size_t c, std::size_t d, std::size_t e, const ClassMember& x,
                                      const ClassMember& y) {
    const auto& cc = pp.functor.source;
    const auto& dc = pp.functor.target;
    const auto& ec = pq.functor.target;
    const auto& q = pq.functor;
    auto [h, k] = pp.integrand(c, d).at(x.object, x.object).decode_pair(x.element);
    auto [h2, k2] = pq.integrand(d, e).at(y.object, y.object).decode_pair(y.element);
    const auto c1 = x.object, d1 = y.object;
    const auto hm = dc.hom(pp.functor.obj_map[c1], d)[h];
    const auto k2m = dc.hom(d, d1)[k2];
    const auto h2m = ec.hom(q.obj_map[d1], e)[h2];
    const auto km = cc.hom(c, c1)[k];
    return pi_class(pqp, c, e, c1, ec.compose(h2m, q.mor_map[dc.compose(k2m, hm)]), km);
}

// Composition of classes x ∈ Π_P(c, d), y ∈ Π_Q(d, e), through their representatives.
// pqp must be the Π profunctor of Q∘P.
inline std::size_t pi_compose(const PiProfunctor& pp, const PiProfunctor& pq, const PiProfunctor& pqp, std::size_t c,
                              std::size_t d, std::size_t e, std::size_t x, std::size_t y) {
    if (!(pp.functor.target == pq.functor.source)) throw MismatchError("pi_compose: functors are not composable");
    if (!(pqp.functor == compose_functors(pp.functor, pq.functor))) {
        throw MismatchError("pi_compose: third argument is not the Π of the composite");
    }
    return pi_compose_members(pp, pq, pqp, c, d, e, pp.entry(c, d).representative(x), pq.entry(d, e).representative(y));
}

// The class of (c, <id, id>) in Π_P(c, P c).
inline std::size_t pi_unit(const PiProfunctor& pi, std::size_t c) {
    const auto pc = pi.functor.obj_map[c];
    return pi_class(pi, c, pc, c, pi.functor.target.identity(pc), pi.functor.source.identity(c));
}

} // namespace optika
