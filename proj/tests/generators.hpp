#pragma once

// Seeded random instances for property tests. Candidates are drawn with arbitrary
// tables and kept only if the validator accepts them.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "optika/prof.hpp"

namespace optika::gen {

inline FinSet atoms(std::size_t n, const std::string& stem = "e") {
    std::vector<Atom> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(stem + std::to_string(i));
    return FinSet(std::move(xs));
}

inline std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline CoPresheaf random_copresheaf(std::mt19937& rng, const FinCategory& c, std::size_t max_fiber) {
    for (int attempt = 0; attempt < 20000; ++attempt) {
        CoPresheaf f{c, {}, {}};
        for (std::size_t o = 0; o < c.num_objects(); ++o) f.fiber.push_back(atoms(pick(rng, 0, max_fiber)));
        for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
            const auto dom = f.fiber[c.src(m)].size();
            f.action.push_back(c.is_identity(m) ? identity_table(dom)
                                                : oracle::random_table(rng, dom, f.fiber[c.tgt(m)].size()));
        }
        if (validate_copresheaf(f).ok()) return f;
    }
    throw std::runtime_error("random_copresheaf: no valid candidate");
}

inline FinProfunctor random_profunctor(std::mt19937& rng, const FinCategory& n, const FinCategory& k,
                                       std::size_t max_fiber) {
    for (int attempt = 0; attempt < 50000; ++attempt) {
        FinProfunctor p{n, k, std::vector<std::vector<FinSet>>(n.num_objects()), {}, {}};
        for (std::size_t a = 0; a < n.num_objects(); ++a) {
            for (std::size_t b = 0; b < k.num_objects(); ++b) p.fiber[a].push_back(atoms(pick(rng, 0, max_fiber)));
        }
        p.contra.assign(n.num_morphisms(), std::vector<Table>(k.num_objects()));
        for (std::size_t f = 0; f < n.num_morphisms(); ++f) {
            for (std::size_t b = 0; b < k.num_objects(); ++b) {
                const auto dom = p.at(n.tgt(f), b).size();
                p.contra[f][b] = n.is_identity(f) ? identity_table(dom)
                                                  : oracle::random_table(rng, dom, p.at(n.src(f), b).size());
            }
        }
        p.co.assign(k.num_morphisms(), std::vector<Table>(n.num_objects()));
        for (std::size_t g = 0; g < k.num_morphisms(); ++g) {
            for (std::size_t a = 0; a < n.num_objects(); ++a) {
                const auto dom = p.at(a, k.src(g)).size();
                p.co[g][a] = k.is_identity(g) ? identity_table(dom)
                                              : oracle::random_table(rng, dom, p.at(a, k.tgt(g)).size());
            }
        }
        if (validate_profunctor(p).ok()) return p;
    }
    throw std::runtime_error("random_profunctor: no valid candidate");
}

// A random 2-cell p ⇒ p2, or nullopt when none was found (there may be none).
inline std::optional<ProfNat> random_prof_nat(std::mt19937& rng, const FinProfunctor& p, const FinProfunctor& p2) {
    for (int attempt = 0; attempt < 5000; ++attempt) {
        ProfNat h;
        bool possible = true;
        for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
            h.components.emplace_back();
            for (std::size_t b = 0; b < p.target.num_objects(); ++b) {
                const auto dom = p.at(a, b).size(), cod = p2.at(a, b).size();
                possible = possible && (dom == 0 || cod > 0);
                h.components.back().push_back(oracle::random_table(rng, dom, cod));
            }
        }
        if (!possible) return std::nullopt;
        if (validate_prof_nat(p, p2, h).ok()) return h;
    }
    return std::nullopt;
}

} // namespace optika::gen
