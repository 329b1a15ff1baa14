// One PASS/FAIL line per acceptance criterion. Exit status is 0 only if all pass.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "optika/corpus.hpp"
#include "optika/laws.hpp"

namespace {

using namespace optika;

const std::string source_dir = OPTIKA_SOURCE_DIR;
const std::string cli = OPTIKA_CLI;

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const auto cmd = cli + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

struct Line {
    std::string criterion;
    bool pass;
    std::string detail;
};

std::vector<Line> lines;

void report(const std::string& criterion, bool pass, const std::string& detail) {
    lines.push_back({criterion, pass, detail});
    std::cout << "acceptance/" << criterion << ": " << (pass ? "PASS" : "FAIL") << " (" << detail << ")\n";
}

// Law results from a run, by "suite/law".
std::map<std::string, laws::LawResult> index_laws(const std::vector<laws::SuiteReport>& rs) {
    std::map<std::string, laws::LawResult> out;
    for (const auto& r : rs) {
        for (const auto& l : r.laws) out[r.name + "/" + l.name] = l;
    }
    return out;
}

// All named laws passed; the detail lists instance counts or the first failure.
std::pair<bool, std::string> laws_pass(const std::map<std::string, laws::LawResult>& ix,
                                       const std::vector<std::string>& names) {
    bool ok = true;
    std::string detail;
    for (const auto& n : names) {
        auto it = ix.find(n);
        const bool pass = it != ix.end() && it->second.pass && it->second.instances > 0;
        ok = ok && pass;
        if (!detail.empty()) detail += "; ";
        detail += n + " " + (it == ix.end() ? "missing" : (pass ? std::to_string(it->second.instances) : it->second.detail));
    }
    return {ok, detail};
}

} // namespace

int main() {
    double cli_seconds = 0;
    const auto c = corpus::load_corpus({source_dir + "/corpus"});
    const auto rs = laws::run_suites(c, {4});
    const auto ix = index_laws(rs);

    {
        // Pairs and fiber sizes recounted here, independently of the suite.
        std::size_t pairs = 0, largest = 0;
        for (const auto& [file, f] : laws::all_copresheaves(c)) {
            if (!laws::valid(f)) continue;
            pairs += f.base.num_objects();
            for (const auto& s : f.fiber) largest = std::max(largest, s.size());
        }
        auto [ok, detail] = laws_pass(ix, {"coyoneda/bijection"});
        report("coyoneda", ok && pairs >= 20 && largest <= 4,
               detail + ", " + std::to_string(pairs) + " pairs, fibers <= " + std::to_string(largest));
    }
    {
        auto [ok, detail] = laws_pass(ix, {"kan/composition"});
        const auto& l = ix.at("kan/composition");
        report("kan_composition", ok && c.kan_chains.size() >= 10, detail + ", " + l.detail);
    }
    {
        auto [ok, detail] = laws_pass(ix, {"pi/well_defined", "pi/associativity", "pi/unit"});
        report("pi_composition", ok, detail);
    }
    {
        // |(p•a)(k1)| = 8 for the 2 x 1 matrix profunctor, recomputed from the file.
        std::size_t eight = 0;
        for (const auto& [file, m] : c.matrix_actions) {
            if (m.p.target.object(m.object) != "k1" || m.expected != 8) continue;
            eight = prof_action(m.p, m.a).fiber[m.object].size();
        }
        auto [ok, detail] = laws_pass(ix, {"prof/matrix_action", "prof/unit", "prof/associativity", "prof/action_composite"});
        report("profunctor", ok && eight == 8, "|(p•a)(k1)| = " + std::to_string(eight) + "; " + detail);
    }
    {
        std::vector<std::string> names;
        for (const auto& s : laws::registry()) {
            if (s.suite == "simple_optics") names.push_back(s.suite + "/" + s.law);
        }
        auto [ok, detail] = laws_pass(ix, names);
        report("simple_optics", ok, detail);
    }
    {
        const auto y1 = monomials({{1, 1}}), y2 = monomials({{1, 2}});
        const auto a = count_polylenses(y2, y1), b = count_polylenses(y1, y2);
        const auto oa = nat_oracle(y2, y1, nat_oracle_min_bound(y2), false).count;
        const auto ob = nat_oracle(y1, y2, nat_oracle_min_bound(y1), false).count;
        auto [ok, detail] = laws_pass(ix, {"poly/nat_counts", "poly/formula_vs_oracle", "poly/ommatidium_invariance",
                                           "poly/pointwise_composition", "poly/nat_injective"});
        report("polynomial", ok && a == 2 && oa == 2 && b == 1 && ob == 1,
               "|Nat(y2,y)| = " + std::to_string(a) + "/" + std::to_string(oa) + ", |Nat(y,y2)| = " + std::to_string(b) +
                   "/" + std::to_string(ob) + "; " + detail);
    }
    {
        auto [ok, detail] = laws_pass(ix, {"compound/discrete_vs_polylens", "compound/identity_unit",
                                           "compound/associativity", "compound/witness_accept_reject"});
        report("compound", ok, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto all = run("laws --all");
        cli_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto again = run("laws --all");
        const auto json1 = run("laws --all --json"), json2 = run("laws --all --json");
        bool planted_ok = true;
        std::string planted;
        for (const auto* f : {"nonassoc_category.json", "nonfunctorial_functor.json", "wrong_nat_count.json",
                              "nonnatural_two_cell.json"}) {
            const auto r = run("laws --all --corpus " + source_dir + "/corpus --corpus " + source_dir +
                               "/tests/fixtures/planted/" + f);
            const bool ok = r.status == 1 && r.out.find(": FAIL (" + std::string(f) + ": ") != std::string::npos;
            planted_ok = planted_ok && ok;
            planted += std::string(planted.empty() ? "" : ", ") + f + (ok ? " exit 1" : " exit " + std::to_string(r.status));
        }
        bool malformed_ok = true;
        for (const auto* f : {"syntax.json", "unknown_field.json"}) {
            const auto r = run("check " + source_dir + "/tests/fixtures/malformed/" + f);
            malformed_ok = malformed_ok && r.status == 2 && r.out.find("parse error: ") != std::string::npos;
        }
        const bool stable = all.out == again.out && json1.out == json2.out && !all.out.empty();
        report("cli", all.status == 0 && planted_ok && malformed_ok && stable,
               "laws --all exit " + std::to_string(all.status) + "; " + planted + "; malformed exit 2 " +
                   (malformed_ok ? "yes" : "no") + "; byte-stable " + (stable ? "yes" : "no"));
    }
    {
        // The limit applies to one full run at default bounds.
        report("runtime", cli_seconds < 60.0,
               "laws --all in " + std::to_string(static_cast<int>(cli_seconds)) + " s, limit 60 s");
    }

    bool ok = true;
    for (const auto& l : lines) ok = ok && l.pass;
    return ok ? 0 : 1;
}
