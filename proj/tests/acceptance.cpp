// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssix/ssix.hpp"

using namespace ssix;

namespace {

/// Collects checks for one criterion; keeps the first failure for the report.
struct criterion {
    int id;
    std::string title;
    uint64_t checks = 0;
    uint64_t failures = 0;
    std::string first_failure;
    std::vector<std::string> notes;

    bool expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures++ == 0) first_failure = what;
        return ok;
    }
    bool passed() const { return failures == 0; }

    void report() const {
        std::cout << (passed() ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << checks << " checks";
        if (!passed()) std::cout << ", " << failures << " failed; first: " << first_failure;
        std::cout << ")\n";
        for (const auto& n : notes) std::cout << "    " << n << '\n';
    }
};

std::string tag(const probed_text& text, uint32_t t, uint32_t k) {
    return "n=" + std::to_string(text.size()) + " sigma=" + std::to_string(text.sigma()) + " t=" + std::to_string(t) +
           " k=" + std::to_string(k);
}

/// Occurrence lists built by one linear scan; answers rank/select by lookup.
struct occurrence_table {
    std::vector<std::vector<uint64_t>> occ;

    explicit occurrence_table(const probed_text& text) : occ(text.sigma()) {
        const auto s = text.symbols();
        for (uint64_t i = 0; i < s.size(); ++i) occ[s[i]].push_back(i);
    }
    uint64_t rank(uint32_t c, uint64_t p) const {
        return static_cast<uint64_t>(std::lower_bound(occ[c].begin(), occ[c].end(), p) - occ[c].begin());
    }
    int64_t select(uint32_t c, uint64_t j) const {
        return j <= occ[c].size() ? static_cast<int64_t>(occ[c][j - 1]) : -1;
    }
};

// Criteria 1 and 3 on one instance: every rank and select query.
void exhaustive_instance(const probed_text& text, uint32_t t, uint32_t k, criterion& answers, criterion& budgets) {
    const auto ix = string_index::build(text, t, k);
    const uint64_t n = text.size();
    for (uint32_t c = 0; c < text.sigma(); ++c) {
        for (uint64_t p = 0; p <= n; ++p) {
            probe_session s;
            const uint64_t got = ix.rank(text, s, c, p);
            const uint64_t want = oracle::rank(text, c, p);
            answers.expect(got == want, tag(text, t, k) + " rank(" + std::to_string(c) + "," + std::to_string(p) + ")");
            budgets.expect(s.count() <= rank_probe_budget(t, k), tag(text, t, k) + " rank probes " + std::to_string(s.count()));
        }
        for (uint64_t j = 1; j <= n + 1; ++j) {
            probe_session s;
            const int64_t got = ix.select(text, s, c, j);
            answers.expect(got == oracle::select(text, c, j),
                           tag(text, t, k) + " select(" + std::to_string(c) + "," + std::to_string(j) + ")");
            budgets.expect(s.count() <= select_probe_budget(t), tag(text, t, k) + " select probes " + std::to_string(s.count()));
            if (got < 0) break;
        }
    }
    for (uint64_t i = 0; i < n; ++i) {
        probe_session s;
        answers.expect(ix.access(text, s, i) == text.symbols()[i], tag(text, t, k) + " access");
        budgets.expect(s.count() == 1, tag(text, t, k) + " access probes");
    }
}

void criterion_exhaustive(criterion& answers, criterion& budgets) {
    uint64_t strings = 0;
    for (uint32_t sigma : {2u, 3u, 4u}) {
        for (uint64_t n = sigma; n <= 8; ++n) {
            std::vector<uint32_t> s(n, 0);
            while (true) {
                const probed_text text(s, sigma);
                ++strings;
                for (uint32_t t : {1u, 2u, 4u})
                    for (uint32_t k : {1u, 2u}) exhaustive_instance(text, t, std::min(k, string_index::max_k(sigma)), answers, budgets);
                uint64_t i = 0;
                while (i < n && ++s[i] == sigma) s[i++] = 0;
                if (i == n) break;
            }
        }
    }
    answers.notes.push_back(std::to_string(strings) + " strings, t in {1,2,4}, k in {1,2} clamped to ceil(log2 sigma)");
}

void criterion_random(criterion& answers, criterion& budgets) {
    std::mt19937_64 rng(20261018);
    const std::vector<uint32_t> sigmas{4, 64, 256, 1024};
    for (int instance = 0; instance < 100; ++instance) {
        const uint32_t sigma = sigmas[instance % sigmas.size()];
        std::vector<uint32_t> s(10000);
        for (auto& x : s) x = static_cast<uint32_t>(rng() % sigma);
        const probed_text text(std::move(s), sigma);
        const occurrence_table table(text);
        for (uint32_t c = 0; c < sigma; c += std::max<uint32_t>(1, sigma / 8)) {
            answers.expect(table.rank(c, 5000) == oracle::rank(text, c, 5000), "occurrence table vs scan (rank)");
            answers.expect(table.select(c, 3) == oracle::select(text, c, 3), "occurrence table vs scan (select)");
        }
        const auto queries = audit::make_queries(text, {static_cast<uint64_t>(instance), 1000});
        const uint32_t g = string_index::max_k(sigma);
        for (uint32_t t : {1u, 4u, 16u}) {
            for (uint32_t k : audit::dedup({1u, g})) {
                const auto ix = string_index::build(text, t, k);
                for (const auto& q : queries) {
                    probe_session session;
                    const std::string where = tag(text, t, k) + " " + q.describe();
                    switch (q.op) {
                    case audit::query::kind::rank:
                        answers.expect(ix.rank(text, session, q.c, q.arg) == table.rank(q.c, q.arg), where);
                        budgets.expect(session.count() <= rank_probe_budget(t, k), where + " probes " + std::to_string(session.count()));
                        break;
                    case audit::query::kind::select:
                        answers.expect(ix.select(text, session, q.c, q.arg) == table.select(q.c, q.arg), where);
                        budgets.expect(session.count() <= select_probe_budget(t), where + " probes " + std::to_string(session.count()));
                        break;
                    case audit::query::kind::access:
                        answers.expect(ix.access(text, session, q.arg) == text.symbols()[q.arg], where);
                        budgets.expect(session.count() == 1, where + " probes");
                        break;
                    }
                }
            }
        }
    }
    answers.notes.push_back("100 texts of n=10000 over sigma in {4,64,256,1024}; 1000 random queries per kind plus boundary queries");
}

void criterion_space(criterion& c) {
    std::mt19937_64 rng(4);
    const uint64_t n = 100000;
    const uint32_t sigma = 1024;
    std::vector<uint32_t> s(n);
    for (auto& x : s) x = static_cast<uint32_t>(rng() % sigma);
    const probed_text text(std::move(s), sigma);
    const double plain = static_cast<double>(n) * std::log2(static_cast<double>(sigma));
    space_report previous;
    bool first = true;
    for (uint32_t t : {1u, 2u, 4u, 8u, 16u}) {
        const auto r = string_index::build(text, t, 1).space();
        std::ostringstream note;
        note << "t=" << t << " r_bits=" << r.total() << " shortcut_bits=" << r.shortcut_bits << " r/(n log2 sigma)="
             << static_cast<double>(r.total()) / plain;
        if (!first) {
            const double ratio = static_cast<double>(r.shortcut_bits) / static_cast<double>(previous.shortcut_bits);
            note << " shortcut ratio=" << ratio;
            c.expect(ratio >= 0.4 && ratio <= 0.6, "shortcut bits did not halve at t=" + std::to_string(t));
            c.expect(r.total() <= previous.total(), "r grew at t=" + std::to_string(t));
        }
        if (t >= 2) c.expect(static_cast<double>(r.total()) < plain, "r >= n log2 sigma at t=" + std::to_string(t));
        c.notes.push_back(note.str());
        previous = r;
        first = false;
    }
    std::ostringstream fixed;
    fixed << "t-independent bits: z=" << previous.z_bits << " cross=" << previous.cross_bits << " mmphf=" << previous.mmphf_bits
          << " pred=" << previous.pred_bits << " marks=" << previous.mark_bits << " locator=" << previous.locator_bits
          << " (n log2 sigma=" << plain << ")";
    c.notes.push_back(fixed.str());
}

void criterion_z(criterion& c) {
    std::mt19937_64 rng(5);
    for (uint32_t sigma : {2u, 3u, 7u, 64u, 300u}) {
        for (uint64_t n : {uint64_t{sigma}, uint64_t{sigma} * 3 + 1, uint64_t{sigma} * 10 + sigma / 2}) {
            std::vector<uint32_t> s(n);
            for (auto& x : s) x = static_cast<uint32_t>(rng() % sigma);
            const probed_text text(s, sigma);
            const auto ix = string_index::build(text, 2, 1);
            for (uint64_t b = 0; b < ix.block_count(); ++b) {
                const uint64_t from = b * sigma, to = std::min<uint64_t>(n, from + sigma);
                std::string want;
                for (uint32_t ch = 0; ch < sigma; ++ch) {
                    want.append(static_cast<size_t>(std::count(s.begin() + from, s.begin() + to, ch)), '1');
                    want += '0';
                }
                const auto& z = ix.blocks()[b].z();
                c.expect(z.size() == (to - from) + sigma && z.to_string() == want,
                         tag(text, 2, 1) + " block " + std::to_string(b));
            }
        }
    }
}

void criterion_components(criterion& c) {
    std::mt19937_64 rng(6);
    for (uint32_t sigma : {3u, 16u, 64u, 1024u}) {
        std::vector<uint32_t> s(sigma * 12 + 5);
        for (auto& x : s) x = static_cast<uint32_t>(rng() % (sigma / 2 + 1)); // leaves some characters absent
        const probed_text text(s, sigma);
        for (uint32_t t : {1u, 3u}) {
            const auto ix = string_index::build(text, t, std::min(2u, string_index::max_k(sigma)));
            for (uint64_t b = 0; b < ix.block_count(); ++b) {
                const auto& blk = ix.blocks()[b];
                auto probe = [&](uint64_t x) { return s[b * sigma + x]; };
                for (uint32_t ch = 0; ch < sigma; ++ch) {
                    if (!blk.contains(ch)) continue;
                    uint64_t rank = 0;
                    for (uint64_t x = 0; x < blk.size(); ++x)
                        if (probe(x) == ch)
                            c.expect(blk.hash(ch)(x) == rank++, "mmphf member rank in block " + std::to_string(b));
                }
                for (uint64_t x = 0; x < blk.size(); ++x) {
                    const uint64_t y = blk.pi(x, probe);
                    c.expect(blk.shortcuts().invert(y, [&](uint64_t z) { return blk.pi(z, probe); }) == x,
                             "inverse of pi in block " + std::to_string(b));
                }
            }
        }
    }
    for (uint64_t sigma = 2; sigma <= 10; ++sigma) {
        for (uint64_t mask = 0; mask < (1ull << sigma); ++mask) {
            std::vector<uint64_t> keys;
            for (uint64_t x = 0; x < sigma; ++x)
                if (mask >> x & 1) keys.push_back(x);
            for (uint32_t k = 1; k <= pred_index::top_rate(sigma); ++k) {
                const pred_index pred(keys, sigma, k);
                for (uint64_t p = 0; p <= sigma; ++p) {
                    uint64_t calls = 0;
                    const uint64_t got = pred.rank(p, [&](uint64_t i) {
                        ++calls;
                        return keys.at(i);
                    });
                    const auto want = static_cast<uint64_t>(std::lower_bound(keys.begin(), keys.end(), p) - keys.begin());
                    c.expect(got == want && calls <= pred_index::max_s_calls(k),
                             "pred sigma=" + std::to_string(sigma) + " mask=" + std::to_string(mask) + " p=" + std::to_string(p));
                }
            }
        }
    }
}

void criterion_serialization(criterion& c) {
    std::mt19937_64 rng(7);
    for (uint32_t sigma : {2u, 5u, 64u, 1024u}) {
        std::vector<uint32_t> s(5000);
        for (auto& x : s) x = static_cast<uint32_t>(rng() % sigma);
        const probed_text text(std::move(s), sigma);
        for (uint32_t t : {1u, 4u}) {
            const auto ix = string_index::build(text, t, 1);
            const std::string bytes = ix.serialize();
            const auto back = string_index::deserialize(std::string_view(bytes));
            c.expect(back.serialize() == bytes, tag(text, t, 1) + " bytes differ after reload");
            for (const auto& q : audit::make_queries(text, {t, 300})) {
                probe_session a, b;
                bool same = true;
                switch (q.op) {
                case audit::query::kind::rank: same = ix.rank(text, a, q.c, q.arg) == back.rank(text, b, q.c, q.arg); break;
                case audit::query::kind::select: same = ix.select(text, a, q.c, q.arg) == back.select(text, b, q.c, q.arg); break;
                case audit::query::kind::access: same = ix.access(text, a, q.arg) == back.access(text, b, q.arg); break;
                }
                c.expect(same && a.count() == b.count(), tag(text, t, 1) + " " + q.describe() + " after reload");
            }
        }
    }
}

void criterion_determinism(criterion& c) {
    std::mt19937_64 rng(8);
    std::vector<uint32_t> s(8000);
    for (auto& x : s) x = static_cast<uint32_t>(rng() % 200);
    const probed_text text(std::move(s), 200);
    for (uint32_t t : {1u, 2u, 5u})
        c.expect(string_index::build(text, t, 3).serialize() == string_index::build(text, t, 3).serialize(),
                 "index bytes differ at t=" + std::to_string(t));
    const auto a = audit::to_csv(audit::sweep(text, {1, 2, 4}, {1, 3}, {42, 500}));
    const auto b = audit::to_csv(audit::sweep(text, {1, 2, 4}, {1, 3}, {42, 500}));
    c.expect(a == b, "bench CSV differs between runs");
}

} // namespace

int main() {
    criterion exhaustive{1, "exhaustive small strings agree with the oracle"};
    criterion random{2, "random texts agree with the oracle"};
    criterion budgets{3, "probe budgets on every query of criteria 1 and 2"};
    criterion space{4, "space: shortcut bits halve per doubling of t, r non-increasing, r < n log2 sigma for t >= 2"};
    criterion z{5, "per-block Z strings are exact"};
    criterion components{6, "component checks: mmphf ranks, pi inversion, predecessor ranks"};
    criterion serialization{7, "serialization round trip preserves bytes, answers and probe counts"};
    criterion determinism{8, "index bytes and bench CSV are deterministic"};

    criterion_exhaustive(exhaustive, budgets);
    criterion_random(random, budgets);
    criterion_space(space);
    criterion_z(z);
    criterion_components(components);
    criterion_serialization(serialization);
    criterion_determinism(determinism);

    bool all = true;
    for (const criterion* c : {&exhaustive, &random, &budgets, &space, &z, &components, &serialization, &determinism}) {
        c->report();
        all &= c->passed();
    }
    return all ? 0 : 1;
}
