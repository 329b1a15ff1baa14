#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "optika/errors.hpp"
#include "optika/finset.hpp"
#include "optika/functional_csp.hpp"

namespace optika {

// Every violated axiom instance, in a deterministic order. Empty means valid.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
    void append(const ValidationReport& other, const std::string& prefix = {}) {
        for (const auto& v : other.violations) violations.push_back(prefix + v);
    }
};

struct Morphism {
    Atom id;
    std::size_t src = 0;
    std::size_t tgt = 0;

    friend bool operator==(const Morphism&, const Morphism&) = default;
};

// A finite category given by explicit tables. Objects and morphisms are sorted by id,
// so indices are canonical. The composition table may be arbitrary; whether it obeys
// the category axioms is decided by validate_category.
class FinCategory {
public:
    class Builder;

    FinCategory() = default;

    std::size_t num_objects() const noexcept { return objects_.size(); }
    std::size_t num_morphisms() const noexcept { return morphisms_.size(); }
    const std::vector<Atom>& objects() const noexcept { return objects_; }
    const Atom& object(std::size_t i) const { return objects_[i]; }
    const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }
    const Morphism& morphism(std::size_t f) const { return morphisms_[f]; }
    std::size_t src(std::size_t f) const { return morphisms_[f].src; }
    std::size_t tgt(std::size_t f) const { return morphisms_[f].tgt; }
    std::size_t identity(std::size_t obj) const { return identity_[obj]; }

    // g∘f, or npos when the table has no entry.
    std::size_t compose(std::size_t g, std::size_t f) const { return compose_[g * morphisms_.size() + f]; }

    // Sorted morphism indices a -> b.
    const std::vector<std::size_t>& hom(std::size_t a, std::size_t b) const { return hom_[a * objects_.size() + b]; }

    FinSet hom_set(std::size_t a, std::size_t b) const {
        std::vector<Atom> ids;
        for (auto f : hom(a, b)) ids.push_back(morphisms_[f].id);
        return FinSet(std::move(ids));
    }

    // Position of morphism f inside hom(src f, tgt f).
    std::size_t hom_position(std::size_t f) const { return hom_pos_[f]; }

    std::optional<std::size_t> find_object(const Atom& id) const {
        auto it = std::lower_bound(objects_.begin(), objects_.end(), id);
        if (it == objects_.end() || *it != id) return std::nullopt;
        return static_cast<std::size_t>(it - objects_.begin());
    }
    std::size_t object_index(const Atom& id) const {
        if (auto i = find_object(id)) return *i;
        throw ValidationError("unknown object '" + id + "'");
    }
    std::optional<std::size_t> find_morphism(const Atom& id) const {
        auto it = morphism_index_.find(id);
        if (it == morphism_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t morphism_index(const Atom& id) const {
        if (auto i = find_morphism(id)) return *i;
        throw ValidationError("unknown morphism '" + id + "'");
    }

    bool is_identity(std::size_t f) const { return identity_[morphisms_[f].src] == f; }

    // Two-sided inverse of f, if any.
    std::optional<std::size_t> inverse(std::size_t f) const {
        for (auto g : hom(tgt(f), src(f))) {
            if (compose(g, f) == identity(src(f)) && compose(f, g) == identity(tgt(f))) return g;
        }
        return std::nullopt;
    }

    bool is_discrete() const {
        for (std::size_t f = 0; f < morphisms_.size(); ++f) {
            if (!is_identity(f)) return false;
        }
        return true;
    }

    friend bool operator==(const FinCategory& x, const FinCategory& y) {
        return x.objects_ == y.objects_ && x.morphisms_ == y.morphisms_ && x.identity_ == y.identity_ &&
               x.compose_ == y.compose_;
    }

private:
    void index() {
        const std::size_t n = objects_.size();
        hom_.assign(n * n, {});
        hom_pos_.assign(morphisms_.size(), 0);
        morphism_index_.clear();
        for (std::size_t f = 0; f < morphisms_.size(); ++f) {
            auto& h = hom_[morphisms_[f].src * n + morphisms_[f].tgt];
            hom_pos_[f] = h.size();
            h.push_back(f);
            morphism_index_.emplace(morphisms_[f].id, f);
        }
    }

    std::vector<Atom> objects_;
    std::vector<Morphism> morphisms_;
    Table identity_;
    Table compose_;
    std::vector<std::vector<std::size_t>> hom_;
    Table hom_pos_;
    std::unordered_map<Atom, std::size_t> morphism_index_;
};

// Accumulates a category by ids. Composites involving an identity are filled in
// automatically unless given explicitly.
class FinCategory::Builder {
public:
    // Adds an object and its identity morphism (named "id_<obj>" unless given).
    Builder& object(const Atom& obj, const Atom& identity_id = {}) {
        objects_.push_back(obj);
        const Atom id = identity_id.empty() ? "id_" + obj : identity_id;
        morphisms_.push_back({id, obj, obj});
        identities_.emplace_back(obj, id);
        return *this;
    }

    // Adds an object without creating an identity; pair with identity().
    Builder& bare_object(const Atom& obj) {
        objects_.push_back(obj);
        return *this;
    }

    Builder& morphism(const Atom& id, const Atom& src, const Atom& tgt) {
        morphisms_.push_back({id, src, tgt});
        return *this;
    }

    Builder& identity(const Atom& obj, const Atom& id) {
        identities_.emplace_back(obj, id);
        return *this;
    }

    Builder& compose(const Atom& g, const Atom& f, const Atom& gf) {
        composites_.push_back({g, f, gf});
        return *this;
    }

    FinCategory build() const {
        FinCategory c;
        c.objects_ = objects_;
        std::sort(c.objects_.begin(), c.objects_.end());
        if (auto d = std::adjacent_find(c.objects_.begin(), c.objects_.end()); d != c.objects_.end()) {
            throw ValidationError("duplicate object '" + *d + "'");
        }
        auto sorted = morphisms_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (std::get<0>(sorted[i]) == std::get<0>(sorted[i - 1])) {
                throw ValidationError("duplicate morphism '" + std::get<0>(sorted[i]) + "'");
            }
        }
        for (const auto& [id, s, t] : sorted) {
            c.morphisms_.push_back({id, c.object_index(s), c.object_index(t)});
        }
        c.index();
        c.identity_.assign(c.objects_.size(), npos);
        for (const auto& [obj, id] : identities_) {
            const auto o = c.object_index(obj);
            if (c.identity_[o] != npos) throw ValidationError("object '" + obj + "' has two identities");
            c.identity_[o] = c.morphism_index(id);
        }
        for (std::size_t o = 0; o < c.objects_.size(); ++o) {
            if (c.identity_[o] == npos) throw ValidationError("object '" + c.objects_[o] + "' has no identity");
        }
        const std::size_t m = c.morphisms_.size();
        c.compose_.assign(m * m, npos);
        for (std::size_t f = 0; f < m; ++f) {
            const auto& mf = c.morphisms_[f];
            // Only fill identity composites that type-check; anything else is left
            // for validate_category to report.
            if (c.identity_[mf.tgt] < m && c.morphisms_[c.identity_[mf.tgt]].src == mf.tgt) {
                c.compose_[c.identity_[mf.tgt] * m + f] = f;
            }
            if (c.identity_[mf.src] < m && c.morphisms_[c.identity_[mf.src]].tgt == mf.src) {
                c.compose_[f * m + c.identity_[mf.src]] = f;
            }
        }
        for (const auto& [g, f, gf] : composites_) {
            c.compose_[c.morphism_index(g) * m + c.morphism_index(f)] = c.morphism_index(gf);
        }
        return c;
    }

private:
    std::vector<Atom> objects_;
    std::vector<std::tuple<Atom, Atom, Atom>> morphisms_;
    std::vector<std::pair<Atom, Atom>> identities_;
    std::vector<std::tuple<Atom, Atom, Atom>> composites_;
};

inline ValidationReport validate_category(const FinCategory& c) {
    ValidationReport r;
    const std::size_t m = c.num_morphisms();
    auto name = [&](std::size_t f) { return c.morphism(f).id; };
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        const auto id = c.identity(o);
        if (c.src(id) != o || c.tgt(id) != o) {
            r.add("identity " + name(id) + " of " + c.object(o) + " is not an endomorphism of it");
        }
    }
    for (std::size_t g = 0; g < m; ++g) {
        for (std::size_t f = 0; f < m; ++f) {
            const auto gf = c.compose(g, f);
            const bool composable = c.tgt(f) == c.src(g);
            if (composable && gf == npos) {
                r.add("composite " + name(g) + "∘" + name(f) + " missing");
            } else if (!composable && gf != npos) {
                r.add("composite " + name(g) + "∘" + name(f) + " defined for non-composable pair");
            } else if (composable && (c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g))) {
                r.add("composite " + name(g) + "∘" + name(f) + " = " + name(gf) + " has wrong endpoints");
            }
        }
    }
    if (!r.ok()) return r;
    for (std::size_t f = 0; f < m; ++f) {
        if (c.compose(c.identity(c.tgt(f)), f) != f) r.add("left identity fails for " + name(f));
        if (c.compose(f, c.identity(c.src(f))) != f) r.add("right identity fails for " + name(f));
    }
    for (std::size_t f = 0; f < m; ++f) {
        for (std::size_t b = 0; b < c.num_objects(); ++b) {
            for (auto g : c.hom(c.tgt(f), b)) {
                for (std::size_t d = 0; d < c.num_objects(); ++d) {
                    for (auto h : c.hom(b, d)) {
                        const auto lhs = c.compose(h, c.compose(g, f));
                        const auto rhs = c.compose(c.compose(h, g), f);
                        if (lhs != rhs) {
                            r.add("associativity fails for (" + name(h) + "," + name(g) + "," + name(f) + "): " +
                                  name(h) + "∘(" + name(g) + "∘" + name(f) + ") = " + name(lhs) + " but (" + name(h) +
                                  "∘" + name(g) + ")∘" + name(f) + " = " + name(rhs));
                        }
                    }
                }
            }
        }
    }
    return r;
}

inline FinCategory opposite(const FinCategory& c) {
    FinCategory::Builder b;
    for (std::size_t o = 0; o < c.num_objects(); ++o) b.bare_object(c.object(o));
    for (const auto& mor : c.morphisms()) b.morphism(mor.id, c.object(mor.tgt), c.object(mor.src));
    for (std::size_t o = 0; o < c.num_objects(); ++o) b.identity(c.object(o), c.morphism(c.identity(o)).id);
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
        for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
            if (auto gf = c.compose(g, f); gf != npos) b.compose(c.morphism(f).id, c.morphism(g).id, c.morphism(gf).id);
        }
    }
    return b.build();
}

inline Atom pair_atom(const Atom& a, const Atom& b) {
    const Atom parts[2] = {a, b};
    return tuple_label(parts);
}

// Objects and morphisms are pairs labelled "<x,y>".
inline FinCategory product_category(const FinCategory& c, const FinCategory& d) {
    FinCategory::Builder b;
    for (const auto& x : c.objects()) {
        for (const auto& y : d.objects()) b.bare_object(pair_atom(x, y));
    }
    for (const auto& f : c.morphisms()) {
        for (const auto& g : d.morphisms()) {
            b.morphism(pair_atom(f.id, g.id), pair_atom(c.object(f.src), d.object(g.src)),
                       pair_atom(c.object(f.tgt), d.object(g.tgt)));
        }
    }
    for (std::size_t x = 0; x < c.num_objects(); ++x) {
        for (std::size_t y = 0; y < d.num_objects(); ++y) {
            b.identity(pair_atom(c.object(x), d.object(y)),
                       pair_atom(c.morphism(c.identity(x)).id, d.morphism(d.identity(y)).id));
        }
    }
    for (std::size_t f2 = 0; f2 < c.num_morphisms(); ++f2) {
        for (std::size_t f1 = 0; f1 < c.num_morphisms(); ++f1) {
            const auto f = c.compose(f2, f1);
            if (f == npos) continue;
            for (std::size_t g2 = 0; g2 < d.num_morphisms(); ++g2) {
                for (std::size_t g1 = 0; g1 < d.num_morphisms(); ++g1) {
                    const auto g = d.compose(g2, g1);
                    if (g == npos) continue;
                    b.compose(pair_atom(c.morphism(f2).id, d.morphism(g2).id),
                              pair_atom(c.morphism(f1).id, d.morphism(g1).id),
                              pair_atom(c.morphism(f).id, d.morphism(g).id));
                }
            }
        }
    }
    return b.build();
}

// Index helpers for a category built by product_category(c, d).
struct ProductIndex {
    const FinCategory* c;
    const FinCategory* d;
    const FinCategory* product;

    std::size_t object(std::size_t x, std::size_t y) const {
        return product->object_index(pair_atom(c->object(x), d->object(y)));
    }
    std::size_t morphism(std::size_t f, std::size_t g) const {
        return product->morphism_index(pair_atom(c->morphism(f).id, d->morphism(g).id));
    }
};

struct FinFunctor {
    FinCategory source;
    FinCategory target;
    Table obj_map;
    Table mor_map;

    friend bool operator==(const FinFunctor&, const FinFunctor&) = default;
};

inline ValidationReport validate_functor(const FinFunctor& p) {
    ValidationReport r;
    const auto& c = p.source;
    const auto& d = p.target;
    if (p.obj_map.size() != c.num_objects() || p.mor_map.size() != c.num_morphisms()) {
        r.add("functor tables do not cover the source category");
        return r;
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        const auto pf = p.mor_map[f];
        if (d.src(pf) != p.obj_map[c.src(f)] || d.tgt(pf) != p.obj_map[c.tgt(f)]) {
            r.add("image of " + c.morphism(f).id + " has wrong endpoints");
        }
    }
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        if (p.mor_map[c.identity(o)] != d.identity(p.obj_map[o])) {
            r.add("identity of " + c.object(o) + " not preserved");
        }
    }
    if (!r.ok()) return r;
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
        for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
            const auto gf = c.compose(g, f);
            if (gf == npos) continue;
            if (p.mor_map[gf] != d.compose(p.mor_map[g], p.mor_map[f])) {
                r.add("composition " + c.morphism(g).id + "∘" + c.morphism(f).id + " not preserved");
            }
        }
    }
    return r;
}

inline FinFunctor identity_functor(const FinCategory& c) {
    return {c, c, identity_table(c.num_objects()), identity_table(c.num_morphisms())};
}

// q∘p.
inline FinFunctor compose_functors(const FinFunctor& p, const FinFunctor& q) {
    if (!(p.target == q.source)) throw MismatchError("compose_functors: target of first is not source of second");
    return {p.source, q.target, compose_tables(q.obj_map, p.obj_map), compose_tables(q.mor_map, p.mor_map)};
}

// A functor base -> Set given by fibers and the function of every morphism.
struct CoPresheaf {
    FinCategory base;
    std::vector<FinSet> fiber;
    std::vector<Table> action;

    friend bool operator==(const CoPresheaf& x, const CoPresheaf& y) {
        return x.base == y.base && x.fiber == y.fiber && x.action == y.action;
    }
};

inline ValidationReport validate_copresheaf(const CoPresheaf& f) {
    ValidationReport r;
    const auto& c = f.base;
    if (f.fiber.size() != c.num_objects() || f.action.size() != c.num_morphisms()) {
        r.add("co-presheaf tables do not cover the base category");
        return r;
    }
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
        const auto& t = f.action[m];
        bool ok = t.size() == f.fiber[c.src(m)].size();
        for (auto v : t) ok = ok && v < f.fiber[c.tgt(m)].size();
        if (!ok) r.add("action of " + c.morphism(m).id + " is not a function between its fibers");
    }
    if (!r.ok()) return r;
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        if (f.action[c.identity(o)] != identity_table(f.fiber[o].size())) {
            r.add("identity of " + c.object(o) + " does not act as the identity");
        }
    }
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
        for (std::size_t h = 0; h < c.num_morphisms(); ++h) {
            const auto gh = c.compose(g, h);
            if (gh == npos) continue;
            if (f.action[gh] != compose_tables(f.action[g], f.action[h])) {
                r.add("action of " + c.morphism(g).id + "∘" + c.morphism(h).id + " is not the composite action");
            }
        }
    }
    return r;
}

inline CoPresheaf constant_copresheaf(const FinCategory& c, const FinSet& s) {
    CoPresheaf f{c, std::vector<FinSet>(c.num_objects(), s), {}};
    f.action.assign(c.num_morphisms(), identity_table(s.size()));
    return f;
}

// The covariant representable c(a, -); elements are morphism ids, action is post-composition.
inline CoPresheaf yoneda(const FinCategory& c, std::size_t a) {
    if (a >= c.num_objects()) throw ValidationError("yoneda: unknown object index");
    CoPresheaf f{c, {}, {}};
    for (std::size_t x = 0; x < c.num_objects(); ++x) f.fiber.push_back(c.hom_set(a, x));
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
        Table t;
        for (auto h : c.hom(a, c.src(g))) t.push_back(c.hom_position(c.compose(g, h)));
        f.action.push_back(std::move(t));
    }
    return f;
}

inline CoPresheaf yoneda(const FinCategory& c, const Atom& a) { return yoneda(c, c.object_index(a)); }

// Components per object of the base.
struct NatTransformation {
    std::vector<Table> components;

    friend bool operator==(const NatTransformation&, const NatTransformation&) = default;
    friend auto operator<=>(const NatTransformation&, const NatTransformation&) = default;
};

inline ValidationReport validate_nat(const CoPresheaf& f, const CoPresheaf& g, const NatTransformation& eta) {
    ValidationReport r;
    if (!(f.base == g.base)) {
        r.add("source and target have different bases");
        return r;
    }
    const auto& c = f.base;
    if (eta.components.size() != c.num_objects()) {
        r.add("wrong number of components");
        return r;
    }
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        const auto& t = eta.components[o];
        bool ok = t.size() == f.fiber[o].size();
        for (auto v : t) ok = ok && v < g.fiber[o].size();
        if (!ok) r.add("component at " + c.object(o) + " is not a function between the fibers");
    }
    if (!r.ok()) return r;
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
        const auto a = c.src(m);
        const auto b = c.tgt(m);
        if (compose_tables(g.action[m], eta.components[a]) != compose_tables(eta.components[b], f.action[m])) {
            r.add("naturality square for " + c.morphism(m).id + " does not commute");
        }
    }
    return r;
}

inline NatTransformation identity_nat(const CoPresheaf& f) {
    NatTransformation n;
    for (const auto& s : f.fiber) n.components.push_back(identity_table(s.size()));
    return n;
}

// beta∘alpha.
inline NatTransformation compose_nats(const NatTransformation& alpha, const NatTransformation& beta) {
    NatTransformation n;
    for (std::size_t o = 0; o < alpha.components.size(); ++o) {
        n.components.push_back(compose_tables(beta.components[o], alpha.components[o]));
    }
    return n;
}

// All natural transformations f => g, in lexicographic order of their components.
inline std::vector<NatTransformation> enumerate_nats(const CoPresheaf& f, const CoPresheaf& g) {
    if (!(f.base == g.base)) throw MismatchError("enumerate_nats: co-presheaves over different bases");
    const auto& c = f.base;
    std::vector<std::size_t> offset(c.num_objects() + 1, 0);
    std::vector<std::size_t> domains;
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        offset[o + 1] = offset[o] + f.fiber[o].size();
        for (std::size_t x = 0; x < f.fiber[o].size(); ++x) domains.push_back(g.fiber[o].size());
    }
    FunctionalCsp csp(domains);
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
        if (c.is_identity(m)) continue;
        const auto map = csp.add_map(g.action[m]);
        for (std::size_t x = 0; x < f.fiber[c.src(m)].size(); ++x) {
            csp.require(offset[c.src(m)] + x, offset[c.tgt(m)] + f.action[m][x], map);
        }
    }
    std::vector<NatTransformation> out;
    csp.solve([&](const std::vector<std::size_t>& v) {
        NatTransformation n;
        for (std::size_t o = 0; o < c.num_objects(); ++o) {
            n.components.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(offset[o]),
                                      v.begin() + static_cast<std::ptrdiff_t>(offset[o + 1]));
        }
        out.push_back(std::move(n));
        return true;
    });
    return out;
}

} // namespace optika
