#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssix/index.hpp"
#include "ssix/oracle.hpp"
#include "ssix/text.hpp"

namespace ssix::audit {

/// Random queries per kind (rank, select, access) drawn from `seed`. When
/// `count` > 0 the adversarial set is added: every block boundary and both
/// ends for rank, the first occurrence at or after each boundary and one
/// overflowing ordinal for select, and both query kinds on absent characters.
struct workload {
    uint64_t seed = 0;
    uint64_t count = 1000;
};

struct query {
    enum class kind { rank, select, access };
    kind op = kind::rank;
    uint32_t c = 0;
    uint64_t arg = 0; // p for rank, j for select, i for access

    std::string describe() const {
        switch (op) {
        case kind::rank: return "rank(" + std::to_string(c) + "," + std::to_string(arg) + ")";
        case kind::select: return "select(" + std::to_string(c) + "," + std::to_string(arg) + ")";
        case kind::access: return "access(" + std::to_string(arg) + ")";
        }
        return {};
    }
};

inline std::vector<query> make_queries(const probed_text& text, const workload& w) {
    std::vector<query> out;
    if (w.count == 0) return out;
    const uint64_t n = text.size();
    const uint32_t sigma = text.sigma();
    std::vector<uint64_t> totals(sigma, 0);
    for (uint32_t c : text.symbols()) ++totals[c];

    // Plain modulo reduction keeps the stream identical across standard libraries.
    std::mt19937_64 rng(w.seed);
    auto below = [&rng](uint64_t bound) { return rng() % bound; };
    for (uint64_t q = 0; q < w.count; ++q) {
        const auto c = static_cast<uint32_t>(below(sigma));
        out.push_back({query::kind::rank, c, below(n + 1)});
        const auto d = static_cast<uint32_t>(below(sigma));
        out.push_back({query::kind::select, d, 1 + below(totals[d] + 1)});
        out.push_back({query::kind::access, 0, below(n)});
    }
    for (uint64_t p = 0; p <= n; p += sigma) {
        const auto c = static_cast<uint32_t>(below(sigma));
        out.push_back({query::kind::rank, c, p});
        if (const uint64_t before = oracle::rank(text, c, p); before < totals[c])
            out.push_back({query::kind::select, c, before + 1});
    }
    out.push_back({query::kind::rank, static_cast<uint32_t>(below(sigma)), n});
    {
        const auto c = static_cast<uint32_t>(below(sigma));
        out.push_back({query::kind::select, c, totals[c] + 1});
    }
    for (uint32_t c = 0; c < sigma; ++c) {
        if (totals[c]) continue;
        out.push_back({query::kind::rank, c, n});
        out.push_back({query::kind::select, c, 1});
    }
    return out;
}

struct bench_record {
    uint64_t n = 0;
    uint32_t sigma = 0;
    uint32_t t = 0;
    uint32_t k = 0;
    uint64_t seed = 0;
    space_report space;
    uint64_t queries = 0;
    uint64_t mismatches = 0;
    uint64_t rank_probes_max = 0;
    double rank_probes_mean = 0;
    uint64_t select_probes_max = 0;
    double select_probes_mean = 0;
    uint64_t access_probes_max = 0;
    std::string rank_worst;   // a query attaining rank_probes_max
    std::string select_worst; // a query attaining select_probes_max
    double ns_per_query = 0;  // informational only
};

/// Runs every query on fresh sessions and checks each answer against the oracle.
inline bench_record measure(const string_index& ix, const probed_text& text, const workload& w) {
    bench_record rec;
    rec.n = ix.size();
    rec.sigma = ix.sigma();
    rec.t = ix.t();
    rec.k = ix.k();
    rec.seed = w.seed;
    rec.space = ix.space();
    const auto queries = make_queries(text, w);
    rec.queries = queries.size();
    uint64_t rank_sum = 0, rank_n = 0, select_sum = 0, select_n = 0;
    const auto started = std::chrono::steady_clock::now();
    for (const query& q : queries) {
        probe_session session;
        switch (q.op) {
        case query::kind::rank: {
            rec.mismatches += ix.rank(text, session, q.c, q.arg) != oracle::rank(text, q.c, q.arg);
            rank_sum += session.count();
            ++rank_n;
            if (session.count() > rec.rank_probes_max || rec.rank_worst.empty()) {
                rec.rank_probes_max = std::max(rec.rank_probes_max, session.count());
                rec.rank_worst = q.describe();
            }
            break;
        }
        case query::kind::select: {
            rec.mismatches += ix.select(text, session, q.c, q.arg) != oracle::select(text, q.c, q.arg);
            select_sum += session.count();
            ++select_n;
            if (session.count() > rec.select_probes_max || rec.select_worst.empty()) {
                rec.select_probes_max = std::max(rec.select_probes_max, session.count());
                rec.select_worst = q.describe();
            }
            break;
        }
        case query::kind::access:
            rec.mismatches += ix.access(text, session, q.arg) != text.symbols()[q.arg];
            rec.access_probes_max = std::max(rec.access_probes_max, session.count());
            break;
        }
    }
    const auto elapsed = std::chrono::steady_clock::now() - started;
    if (!queries.empty())
        rec.ns_per_query = std::chrono::duration<double, std::nano>(elapsed).count() / static_cast<double>(queries.size());
    rec.rank_probes_mean = rank_n ? static_cast<double>(rank_sum) / static_cast<double>(rank_n) : 0;
    rec.select_probes_mean = select_n ? static_cast<double>(select_sum) / static_cast<double>(select_n) : 0;
    return rec;
}

inline std::vector<uint32_t> dedup(std::vector<uint32_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

/// One record per (t, k) pair, t-major. Duplicate list entries are dropped.
inline std::vector<bench_record> sweep(const probed_text& text, const std::vector<uint32_t>& t_list,
                                       const std::vector<uint32_t>& k_list, const workload& w) {
    std::vector<bench_record> records;
    for (uint32_t t : dedup(t_list))
        for (uint32_t k : dedup(k_list)) records.push_back(measure(string_index::build(text, t, k), text, w));
    return records;
}

/// Constant C in r - header <= C * (n log2(sigma) / t + n * max(1, log2 log2 sigma)).
/// The fixed per-symbol parts (Z, block counts, locator, marks) cost about 6n bits,
/// which dominates the bound when sigma is tiny; 8 covers every alphabet size.
inline constexpr double redundancy_constant = 8.0;

inline double redundancy_bound(uint64_t n, uint32_t sigma, uint32_t t) {
    const double lg = std::log2(static_cast<double>(sigma));
    const double lglg = std::max(1.0, std::log2(lg));
    return static_cast<double>(n) * lg / t + static_cast<double>(n) * lglg;
}

struct budget_report {
    bool pass = true;
    double constant = redundancy_constant;
    double measured_constant = 0; // max over records of r / bound
    std::vector<std::string> lines;
};

/// Probe-budget violations of one record, each naming its worst query.
inline std::vector<std::string> probe_violations(const bench_record& r) {
    std::vector<std::string> out;
    if (r.mismatches) out.push_back(std::to_string(r.mismatches) + " answers differ from the oracle");
    if (r.access_probes_max > 1) out.push_back("access used " + std::to_string(r.access_probes_max) + " probes");
    if (r.select_probes_max > select_probe_budget(r.t))
        out.push_back(r.select_worst + " used " + std::to_string(r.select_probes_max) + " probes, budget " +
                      std::to_string(select_probe_budget(r.t)));
    if (r.rank_probes_max > rank_probe_budget(r.t, r.k))
        out.push_back(r.rank_worst + " used " + std::to_string(r.rank_probes_max) + " probes, budget " +
                      std::to_string(rank_probe_budget(r.t, r.k)));
    return out;
}

/// Asserts probe budgets and r - header <= C * bound for every record.
inline budget_report check_budget(const std::vector<bench_record>& records, double constant = redundancy_constant) {
    budget_report rep;
    rep.constant = constant;
    for (const auto& r : records) {
        const std::string tag = "n=" + std::to_string(r.n) + " sigma=" + std::to_string(r.sigma) + " t=" + std::to_string(r.t) +
                                " k=" + std::to_string(r.k);
        auto fail = [&](const std::string& what) {
            rep.pass = false;
            rep.lines.push_back("FAIL " + tag + ": " + what);
        };
        for (const auto& v : probe_violations(r)) fail(v);
        const double body = static_cast<double>(r.space.total() - r.space.header_bits);
        const double ratio = body / redundancy_bound(r.n, r.sigma, r.t);
        rep.measured_constant = std::max(rep.measured_constant, ratio);
        if (ratio > constant) {
            std::ostringstream os;
            os << "r=" << r.space.total() << " bits exceeds " << constant << " * bound (ratio " << ratio << ")";
            fail(os.str());
        }
    }
    std::ostringstream os;
    os << (rep.pass ? "PASS" : "FAIL") << " " << records.size() << " records, C=" << constant
       << " measured max (r - header)/bound=" << rep.measured_constant;
    rep.lines.push_back(os.str());
    return rep;
}

inline const char* csv_header = "n,sigma,t,k,r_bits,z_bits,cross_bits,mmphf_bits,pred_bits,shortcut_bits,rank_probes_max,select_probes_max,seed";

inline std::string to_csv(const std::vector<bench_record>& records) {
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto& r : records)
        os << r.n << ',' << r.sigma << ',' << r.t << ',' << r.k << ',' << r.space.total() << ',' << r.space.z_bits << ','
           << r.space.cross_bits << ',' << r.space.mmphf_bits << ',' << r.space.pred_bits << ',' << r.space.shortcut_bits << ','
           << r.rank_probes_max << ',' << r.select_probes_max << ',' << r.seed << '\n';
    return os.str();
}

inline nlohmann::json to_json(const std::vector<bench_record>& records) {
    auto out = nlohmann::json::array();
    for (const auto& r : records)
        out.push_back({{"n", r.n},
                       {"sigma", r.sigma},
                       {"t", r.t},
                       {"k", r.k},
                       {"r_bits", r.space.total()},
                       {"z_bits", r.space.z_bits},
                       {"cross_bits", r.space.cross_bits},
                       {"mmphf_bits", r.space.mmphf_bits},
                       {"pred_bits", r.space.pred_bits},
                       {"shortcut_bits", r.space.shortcut_bits},
                       {"rank_probes_max", r.rank_probes_max},
                       {"select_probes_max", r.select_probes_max},
                       {"seed", r.seed}});
    return out;
}

} // namespace ssix::audit
