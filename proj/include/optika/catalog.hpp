#pragma once

// Small named categories and functors used by the corpus and the tests.

#include <string>
#include <vector>

#include "optika/fincat.hpp"

namespace optika::catalog {

inline FinCategory discrete(const std::vector<Atom>& objects) {
    FinCategory::Builder b;
    for (const auto& o : objects) b.object(o);
    return b.build();
}

inline FinCategory empty_category() { return discrete({}); }

// 0 --u--> 1
inline FinCategory walking_arrow() {
    return FinCategory::Builder{}.object("0").object("1").morphism("u", "0", "1").build();
}

// 0 <--> 1 with u: 0 -> 1 and v: 1 -> 0 mutually inverse.
inline FinCategory walking_iso() {
    return FinCategory::Builder{}
        .object("0")
        .object("1")
        .morphism("u", "0", "1")
        .morphism("v", "1", "0")
        .compose("v", "u", "id_0")
        .compose("u", "v", "id_1")
        .build();
}

// 0 -> 1 -> 2 as a poset.
inline FinCategory chain3() {
    return FinCategory::Builder{}
        .object("0")
        .object("1")
        .object("2")
        .morphism("a", "0", "1")
        .morphism("b", "1", "2")
        .morphism("ba", "0", "2")
        .compose("b", "a", "ba")
        .build();
}

// Two parallel arrows s, t: 0 -> 1.
inline FinCategory parallel_pair() {
    return FinCategory::Builder{}.object("0").object("1").morphism("s", "0", "1").morphism("t", "0", "1").build();
}

// One object, morphisms g^0..g^{n-1} composing by addition mod n. Identity is "e".
inline FinCategory cyclic_group(std::size_t n) {
    FinCategory::Builder b;
    b.object("*", "e");
    auto name = [](std::size_t k) { return k == 0 ? std::string("e") : "g" + std::to_string(k); };
    for (std::size_t k = 1; k < n; ++k) b.morphism(name(k), "*", "*");
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) b.compose(name(i), name(j), name((i + j) % n));
    }
    return b.build();
}

// One object with an idempotent e∘e = e besides the identity.
inline FinCategory idempotent() {
    return FinCategory::Builder{}.object("*", "1").morphism("e", "*", "*").compose("e", "e", "e").build();
}

// x <- 0 -> y
inline FinCategory span() {
    return FinCategory::Builder{}
        .object("0")
        .object("x")
        .object("y")
        .morphism("l", "0", "x")
        .morphism("r", "0", "y")
        .build();
}

// Id of the function n -> m with the given table in finset_category.
inline Atom finset_morphism_id(std::size_t n, std::size_t m, const Table& f) {
    std::string s = std::to_string(n) + ":" + std::to_string(m) + ":";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s;
}

// The full subcategory of Set on {0..k-1} for k = 0..max_size, with every function.
// Object "k" stands for a set of size k; max_size must stay below 10 so that the object
// order is numeric.
inline FinCategory finset_category(std::size_t max_size) {
    if (max_size > 9) throw ValidationError("finset_category: max_size above 9");
    FinCategory::Builder b;
    std::vector<std::vector<std::vector<Table>>> fns(max_size + 1, std::vector<std::vector<Table>>(max_size + 1));
    for (std::size_t n = 0; n <= max_size; ++n) {
        b.bare_object(std::to_string(n));
        for (std::size_t m = 0; m <= max_size; ++m) {
            fns[n][m] = all_functions(n, m);
            for (const auto& f : fns[n][m]) b.morphism(finset_morphism_id(n, m, f), std::to_string(n), std::to_string(m));
        }
        b.identity(std::to_string(n), finset_morphism_id(n, n, identity_table(n)));
    }
    for (std::size_t n = 0; n <= max_size; ++n) {
        for (std::size_t m = 0; m <= max_size; ++m) {
            for (std::size_t k = 0; k <= max_size; ++k) {
                for (const auto& f : fns[n][m]) {
                    for (const auto& g : fns[m][k]) {
                        b.compose(finset_morphism_id(m, k, g), finset_morphism_id(n, m, f),
                                  finset_morphism_id(n, k, compose_tables(g, f)));
                    }
                }
            }
        }
    }
    return b.build();
}

// Builds a functor from object and morphism id maps.
inline FinFunctor functor(const FinCategory& source, const FinCategory& target,
                          const std::vector<std::pair<Atom, Atom>>& objects,
                          const std::vector<std::pair<Atom, Atom>>& morphisms) {
    FinFunctor f{source, target, Table(source.num_objects(), npos), Table(source.num_morphisms(), npos)};
    for (const auto& [a, b] : objects) f.obj_map[source.object_index(a)] = target.object_index(b);
    for (const auto& [a, b] : morphisms) f.mor_map[source.morphism_index(a)] = target.morphism_index(b);
    for (std::size_t o = 0; o < source.num_objects(); ++o) {
        if (f.obj_map[o] == npos) throw ValidationError("functor: object '" + source.object(o) + "' unmapped");
        if (f.mor_map[source.identity(o)] == npos) f.mor_map[source.identity(o)] = target.identity(f.obj_map[o]);
    }
    for (std::size_t m = 0; m < source.num_morphisms(); ++m) {
        if (f.mor_map[m] == npos) throw ValidationError("functor: morphism '" + source.morphism(m).id + "' unmapped");
    }
    return f;
}

// The functor from a discrete category sending every object to `to`.
inline FinFunctor constant_functor(const FinCategory& source, const FinCategory& target, const Atom& to) {
    std::vector<std::pair<Atom, Atom>> objs;
    for (const auto& o : source.objects()) objs.emplace_back(o, to);
    std::vector<std::pair<Atom, Atom>> mors;
    for (const auto& m : source.morphisms()) mors.emplace_back(m.id, target.morphism(target.identity(target.object_index(to))).id);
    return functor(source, target, objs, mors);
}

// Builds a co-presheaf from fibers and the non-identity actions, given as element maps.
inline CoPresheaf copresheaf(const FinCategory& base, const std::vector<std::pair<Atom, std::vector<Atom>>>& fibers,
                             const std::vector<std::pair<Atom, std::vector<std::pair<Atom, Atom>>>>& actions) {
    CoPresheaf f{base, std::vector<FinSet>(base.num_objects()), std::vector<Table>(base.num_morphisms())};
    for (const auto& [o, xs] : fibers) f.fiber[base.object_index(o)] = FinSet(xs);
    for (std::size_t m = 0; m < base.num_morphisms(); ++m) {
        if (base.is_identity(m)) f.action[m] = identity_table(f.fiber[base.src(m)].size());
    }
    for (const auto& [m, pairs] : actions) {
        const auto mi = base.morphism_index(m);
        const auto& dom = f.fiber[base.src(mi)];
        const auto& cod = f.fiber[base.tgt(mi)];
        Table t(dom.size(), npos);
        for (const auto& [x, y] : pairs) t[dom.index_of(x)] = cod.index_of(y);
        f.action[mi] = std::move(t);
    }
    return f;
}

} // namespace optika::catalog
