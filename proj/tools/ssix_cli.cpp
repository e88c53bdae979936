// ssix: build, query, verify and benchmark systematic rank/select indexes.
//
// Exit codes: 0 ok, 1 verification or budget failure, 2 usage or malformed
// input, 3 I/O, 4 index/text pairing mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssix/ssix.hpp"

namespace {

enum exit_code : int { ok = 0, failed = 1, usage = 2, io_error = 3, pairing = 4 };

int exit_for(ssix::errc code) {
    switch (code) {
    case ssix::errc::io: return io_error;
    case ssix::errc::pairing_mismatch: return pairing;
    default: return usage;
    }
}

ssix::input_format format_or_throw(const std::string& name) {
    auto f = ssix::parse_format(name);
    if (!f) throw ssix::error(ssix::errc::invalid_argument, "unknown format '" + name + "' (raw8, u32le, tokens)");
    return *f;
}

ssix::probed_text read_text(const std::string& path, const std::string& format, std::optional<uint32_t> sigma) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ssix::error(ssix::errc::io, "cannot open input " + path);
    return ssix::probed_text::load(in, format_or_throw(format), sigma);
}

ssix::string_index read_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ssix::error(ssix::errc::io, "cannot open index " + path);
    return ssix::string_index::deserialize(in);
}

void print_space(const ssix::string_index& ix) {
    const auto r = ix.space();
    std::cout << "n=" << ix.size() << " sigma=" << ix.sigma() << " t=" << ix.t() << " k=" << ix.k()
              << " blocks=" << ix.block_count() << '\n'
              << "r_bits=" << r.total() << " header=" << r.header_bits << " z=" << r.z_bits << " cross=" << r.cross_bits
              << " mmphf=" << r.mmphf_bits << " pred=" << r.pred_bits << " shortcut=" << r.shortcut_bits
              << " marks=" << r.mark_bits << " locator=" << r.locator_bits << " fallback_buckets=" << r.fallback_buckets
              << '\n';
}

uint64_t parse_u64(const std::string& word) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(word, &used);
        if (used != word.size() || word.front() == '-') throw std::invalid_argument(word);
        return v;
    } catch (const std::exception&) {
        throw ssix::error(ssix::errc::invalid_argument, "'" + word + "' is not a non-negative integer");
    }
}

uint32_t parse_symbol(const std::string& word) {
    const uint64_t v = parse_u64(word);
    if (v > UINT32_MAX) throw ssix::error(ssix::errc::bad_symbol, "symbol " + word + " does not fit 32 bits");
    return static_cast<uint32_t>(v);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Systematic rank/select index over a probed text"};
    app.require_subcommand(1);

    std::string input, format = "raw8", output, index_path, csv_path, json_path;
    std::optional<uint32_t> sigma;
    uint32_t t = 0, k = 1;
    uint64_t queries = 1000, seed = 0;
    std::vector<std::string> words;
    std::vector<uint32_t> t_list{1, 2, 4}, k_list{1};

    auto* build = app.add_subcommand("build", "Build an index file for a text");
    build->add_option("--input", input, "Text file")->required();
    build->add_option("--format", format, "raw8 | u32le | tokens");
    build->add_option("--sigma", sigma, "Alphabet size (default: 1 + largest symbol)");
    build->add_option("--t", t, "Probe budget parameter (>= 1)")->required();
    build->add_option("--k", k, "In-bucket sampling rate (1 <= k <= ceil(log2 sigma))");
    build->add_option("--output", output, "Index file to write")->required();

    auto* query = app.add_subcommand("query", "Answer one query: rank c p | select c j | access i");
    query->add_option("--index", index_path, "Index file")->required();
    query->add_option("--input", input, "Text file the index was built on")->required();
    query->add_option("--format", format, "raw8 | u32le | tokens");
    query->add_option("words", words, "Query")->required();

    auto* verify = app.add_subcommand("verify", "Cross-check random and boundary queries against a linear scan");
    verify->add_option("--index", index_path, "Index file")->required();
    verify->add_option("--input", input, "Text file the index was built on")->required();
    verify->add_option("--format", format, "raw8 | u32le | tokens");
    verify->add_option("--queries", queries, "Random queries per kind");
    verify->add_option("--seed", seed, "Workload seed");

    auto* bench = app.add_subcommand("bench", "Sweep (t, k) and audit probes and space");
    bench->add_option("--input", input, "Text file")->required();
    bench->add_option("--format", format, "raw8 | u32le | tokens");
    bench->add_option("--sigma", sigma, "Alphabet size (default: 1 + largest symbol)");
    bench->add_option("--t-list", t_list, "Comma-separated t values")->delimiter(',');
    bench->add_option("--k-list", k_list, "Comma-separated k values")->delimiter(',');
    bench->add_option("--out", csv_path, "CSV output")->required();
    bench->add_option("--json", json_path, "JSON output");
    bench->add_option("--queries", queries, "Random queries per kind");
    bench->add_option("--seed", seed, "Workload seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*build) {
            const auto text = read_text(input, format, sigma);
            const auto ix = ssix::string_index::build(text, t, k);
            std::ofstream out(output, std::ios::binary);
            if (!out) throw ssix::error(ssix::errc::io, "cannot open output " + output);
            ix.serialize(out);
            print_space(ix);
            return ok;
        }

        if (*query) {
            const auto ix = read_index(index_path);
            const auto text = read_text(input, format, ix.sigma());
            ix.check_pairing(text);
            ssix::probe_session session;
            const std::string& op = words.front();
            if (op == "rank" && words.size() == 3) {
                const auto answer = ix.rank(text, session, parse_symbol(words[1]), parse_u64(words[2]));
                std::cout << answer << " probes=" << session.count() << '\n';
            } else if (op == "select" && words.size() == 3) {
                const auto answer = ix.select(text, session, parse_symbol(words[1]), parse_u64(words[2]));
                std::cout << answer << " probes=" << session.count() << '\n';
            } else if (op == "access" && words.size() == 2) {
                const auto answer = ix.access(text, session, parse_u64(words[1]));
                std::cout << answer << " probes=" << session.count() << '\n';
            } else {
                std::cerr << "usage: query ... (rank c p | select c j | access i)\n";
                return usage;
            }
            return ok;
        }

        if (*verify) {
            const auto ix = read_index(index_path);
            const auto text = read_text(input, format, ix.sigma());
            ix.check_pairing(text);
            const auto rec = ssix::audit::measure(ix, text, {seed, queries});
            std::cout << "checked=" << rec.queries << " mismatches=" << rec.mismatches
                      << " rank_probes_max=" << rec.rank_probes_max << " select_probes_max=" << rec.select_probes_max
                      << " access_probes_max=" << rec.access_probes_max << '\n';
            const auto violations = ssix::audit::probe_violations(rec);
            for (const auto& v : violations) std::cout << "FAIL " << v << '\n';
            std::cout << (violations.empty() ? "PASS" : "FAIL") << '\n';
            return violations.empty() ? ok : failed;
        }

        if (*bench) {
            const auto text = read_text(input, format, sigma);
            const auto records = ssix::audit::sweep(text, t_list, k_list, {seed, queries});
            const auto report = ssix::audit::check_budget(records);
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw ssix::error(ssix::errc::io, "cannot open output " + csv_path);
            csv << ssix::audit::to_csv(records);
            if (!json_path.empty()) {
                std::ofstream json(json_path, std::ios::binary);
                if (!json) throw ssix::error(ssix::errc::io, "cannot open output " + json_path);
                json << ssix::audit::to_json(records).dump(2) << '\n';
            }
            for (const auto& line : report.lines) std::cout << line << '\n';
            return report.pass ? ok : failed;
        }
    } catch (const ssix::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_for(e.code());
    }
    return usage;
}
