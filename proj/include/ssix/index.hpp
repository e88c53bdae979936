#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssix/bits.hpp"
#include "ssix/error.hpp"
#include "ssix/io.hpp"
#include "ssix/mmphf.hpp"
#include "ssix/perm.hpp"
#include "ssix/pred.hpp"
#include "ssix/text.hpp"

namespace ssix {

constexpr uint64_t select_probe_budget(uint32_t t) noexcept { return 2 * uint64_t{t} + 1; }

constexpr uint64_t rank_probe_budget(uint32_t t, uint32_t k) noexcept {
    return (3 + uint64_t{ceil_log2(k)}) * select_probe_budget(t);
}

/// Exact bit counts of every query-time component. `total()` is the redundancy r.
struct space_report {
    uint64_t header_bits = 0;   // n, sigma, t, k, text fingerprint
    uint64_t z_bits = 0;        // per-block Z strings with directories
    uint64_t cross_bits = 0;    // per-character block-count bitvectors
    uint64_t mmphf_bits = 0;
    uint64_t pred_bits = 0;
    uint64_t shortcut_bits = 0; // back-pointer arrays
    uint64_t mark_bits = 0;     // shortcut mark bitvectors with directories
    uint64_t locator_bits = 0;  // per-block present-character bitvectors
    uint64_t fallback_buckets = 0;

    uint64_t total() const noexcept {
        return header_bits + z_bits + cross_bits + mmphf_bits + pred_bits + shortcut_bits + mark_bits + locator_bits;
    }
};

/// One block of sigma consecutive positions (the last may be shorter).
///
/// Z = 1^{n_0} 0 1^{n_1} 0 ... 1^{n_{sigma-1}} 0 gives every character's
/// multiplicity and the number of smaller characters. The block's stable-sort
/// permutation pi(i) = (rank of i among positions holding c) + (occurrences of
/// characters below c) is never stored: it is evaluated with one probe plus
/// the monotone hash of c, and inverted through the shortcut table. Characters
/// that occur in the block own a monotone hash and a predecessor index over
/// their positions.
class block_index {
public:
    block_index() = default;

    block_index(std::span<const uint32_t> symbols, uint32_t sigma, uint32_t t, uint32_t k)
        : len_(symbols.size()), sigma_(sigma) {
        std::vector<uint64_t> counts(sigma, 0);
        for (uint32_t c : symbols) ++counts[c];

        std::vector<uint64_t> start(sigma + 1, 0);
        for (uint32_t c = 0; c < sigma; ++c) start[c + 1] = start[c] + counts[c];

        std::vector<uint64_t> zwords((len_ + sigma + 63) / 64, 0);
        std::vector<uint64_t> pwords((sigma + 63) / 64, 0);
        uint64_t bit = 0;
        for (uint32_t c = 0; c < sigma; ++c) {
            for (uint64_t r = 0; r < counts[c]; ++r, ++bit) zwords[bit / 64] |= uint64_t{1} << (bit % 64);
            ++bit;
            if (counts[c]) pwords[c / 64] |= uint64_t{1} << (c % 64);
        }
        z_ = rs_bitvector(std::move(zwords), len_ + sigma);
        present_ = rs_bitvector(std::move(pwords), sigma);

        // Positions grouped by character, ascending within each group; the
        // slot of position i is exactly pi(i).
        std::vector<uint64_t> by_char(len_);
        std::vector<uint64_t> pi(len_);
        std::vector<uint64_t> fill(start.begin(), start.end() - 1);
        for (uint64_t i = 0; i < len_; ++i) {
            pi[i] = fill[symbols[i]]++;
            by_char[pi[i]] = i;
        }

        hashes_.reserve(present_.ones());
        preds_.reserve(present_.ones());
        for (uint32_t c = 0; c < sigma; ++c) {
            if (!counts[c]) continue;
            std::span<const uint64_t> positions(by_char.data() + start[c], counts[c]);
            hashes_.emplace_back(positions, len_);
            preds_.emplace_back(positions, sigma, k);
        }
        shortcuts_ = shortcut_table(len_, t, [&pi](uint64_t x) { return pi[x]; });
    }

    uint64_t size() const noexcept { return len_; }

    /// n_c inside this block.
    uint64_t count(uint32_t c) const { return prefix(c + 1) - prefix(c); }

    /// Occurrences of characters smaller than c inside this block.
    uint64_t prefix(uint32_t c) const {
        if (c == 0) return 0;
        if (c >= sigma_) return len_;
        return *z_.select0(c) + 1 - c;
    }

    bool contains(uint32_t c) const noexcept { return c < sigma_ && present_[c]; }

    const monotone_hash& hash(uint32_t c) const { return hashes_.at(slot(c)); }
    const pred_index& pred(uint32_t c) const { return preds_.at(slot(c)); }

    const rs_bitvector& z() const noexcept { return z_; }
    const rs_bitvector& present() const noexcept { return present_; }
    const shortcut_table& shortcuts() const noexcept { return shortcuts_; }

    /// pi(x); `probe(x)` reads the symbol at in-block position x.
    template <class Probe>
    uint64_t pi(uint64_t x, Probe&& probe) const {
        const uint32_t c = probe(x);
        if (!contains(c)) throw error(errc::corrupt_index, "probed character has no structures in its block");
        return prefix(c) + hashes_[present_.rank1(c)](x);
    }

    /// In-block position of the j-th (1-based) occurrence of c; j <= count(c).
    template <class Probe>
    uint64_t select(uint32_t c, uint64_t j, Probe&& probe) const {
        return shortcuts_.invert(prefix(c) + j - 1, [&](uint64_t x) { return pi(x, probe); });
    }

    /// Occurrences of c in in-block positions [0, p).
    template <class Probe>
    uint64_t rank(uint32_t c, uint64_t p, Probe&& probe) const {
        if (!contains(c)) return 0;
        return preds_[present_.rank1(c)].rank(p, [&](uint64_t i) { return select(c, i + 1, probe); });
    }

    uint64_t mmphf_bits() const noexcept {
        uint64_t total = 0;
        for (const auto& h : hashes_) total += h.payload_bits();
        return total;
    }
    uint64_t pred_bits() const noexcept {
        uint64_t total = 0;
        for (const auto& p : preds_) total += p.payload_bits();
        return total;
    }
    uint64_t fallback_buckets() const noexcept {
        uint64_t total = 0;
        for (const auto& h : hashes_) total += h.fallback_buckets();
        return total;
    }

    // Byte format: Z bitvector, shortcut table, then a bit stream (u64 length +
    // words) holding, per present character in order, its monotone-hash
    // payload followed by its predecessor-index payload.
    void serialize(byte_writer& out) const {
        z_.serialize(out);
        shortcuts_.serialize(out);
        bit_writer records;
        for (size_t i = 0; i < hashes_.size(); ++i) {
            hashes_[i].encode_payload(records);
            preds_[i].encode_payload(records);
        }
        out.put_u64(records.size());
        out.put_words(records.words());
    }

    static block_index deserialize(byte_reader& in, uint64_t len, uint32_t sigma, uint32_t t, uint32_t k) {
        block_index b;
        b.len_ = len;
        b.sigma_ = sigma;
        b.z_ = rs_bitvector::deserialize(in);
        if (b.z_.size() != len + sigma || b.z_.zeros() != sigma) throw error(errc::corrupt_index, "Z string has the wrong shape");
        if (b.z_.size() > 0 && b.z_[b.z_.size() - 1]) throw error(errc::corrupt_index, "Z string must end with a zero");
        b.shortcuts_ = shortcut_table::deserialize(in, t);
        if (b.shortcuts_.size() != len) throw error(errc::corrupt_index, "shortcut table length mismatch");

        std::vector<uint64_t> pwords((sigma + 63) / 64, 0);
        for (uint32_t c = 0; c < sigma; ++c)
            if (b.count(c)) pwords[c / 64] |= uint64_t{1} << (c % 64);
        b.present_ = rs_bitvector(std::move(pwords), sigma);

        const uint64_t record_bits = in.get_u64();
        if (record_bits / 8 > in.remaining()) throw error(errc::truncated, "block records");
        const auto words = in.get_words((record_bits + 63) / 64);
        bit_reader records(words, record_bits);
        b.hashes_.reserve(b.present_.ones());
        b.preds_.reserve(b.present_.ones());
        for (uint32_t c = 0; c < sigma; ++c) {
            const uint64_t m = b.count(c);
            if (!m) continue;
            b.hashes_.push_back(monotone_hash::decode_payload(records, m, len));
            b.preds_.push_back(pred_index::decode_payload(records, m, sigma, k));
        }
        if (!records.at_end()) throw error(errc::corrupt_index, "trailing bits in block records");
        return b;
    }

    friend bool operator==(const block_index&, const block_index&) = default;

private:
    size_t slot(uint32_t c) const {
        if (!contains(c)) throw error(errc::bad_symbol, "character " + std::to_string(c) + " does not occur in this block");
        return present_.rank1(c);
    }

    uint64_t len_ = 0;
    uint32_t sigma_ = 0;
    rs_bitvector z_;
    rs_bitvector present_;
    std::vector<monotone_hash> hashes_;
    std::vector<pred_index> preds_;
    shortcut_table shortcuts_;
};

/// Systematic rank/select index over a probed text. The index holds counts,
/// hashes and shortcuts only; every symbol it needs at query time is read
/// through the caller's probe session.
class string_index {
public:
    static constexpr char magic[4] = {'S', 'S', 'I', 'X'};
    static constexpr uint8_t version = 0x01;
    static constexpr uint32_t cross_section_tag = 1;
    static constexpr uint32_t block_section_tag = 2;
    static constexpr uint64_t header_bits = 64 + 32 + 32 + 32 + 64;

    static uint32_t max_k(uint32_t sigma) noexcept { return pred_index::top_rate(sigma); }

    string_index() = default;

    static string_index build(const probed_text& text, uint32_t t, uint32_t k) {
        if (t < 1) throw error(errc::invalid_argument, "t must be at least 1");
        if (k < 1 || k > max_k(text.sigma()))
            throw error(errc::invalid_argument,
                        "k must lie in [1, " + std::to_string(max_k(text.sigma())) + "], got " + std::to_string(k));
        string_index ix;
        ix.n_ = text.size();
        ix.sigma_ = text.sigma();
        ix.t_ = t;
        ix.k_ = k;
        ix.fingerprint_ = text.fingerprint();

        const auto symbols = text.symbols();
        const uint64_t nb = ix.block_count();
        ix.blocks_.reserve(nb);
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t from = b * ix.sigma_;
            ix.blocks_.emplace_back(symbols.subspan(from, std::min<uint64_t>(ix.sigma_, ix.n_ - from)), ix.sigma_, t, k);
        }

        // V_c = 1^{m_{c,0}} 0 1^{m_{c,1}} 0 ... over the per-block counts.
        std::vector<uint64_t> totals(ix.sigma_, 0);
        for (uint32_t c : symbols) ++totals[c];
        std::vector<std::vector<uint64_t>> words(ix.sigma_);
        std::vector<uint64_t> cursor(ix.sigma_, 0);
        for (uint32_t c = 0; c < ix.sigma_; ++c) words[c].assign((totals[c] + nb + 63) / 64, 0);
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t from = b * ix.sigma_;
            const uint64_t to = std::min<uint64_t>(from + ix.sigma_, ix.n_);
            for (uint64_t i = from; i < to; ++i) {
                const uint32_t c = symbols[i];
                words[c][cursor[c] / 64] |= uint64_t{1} << (cursor[c] % 64);
                ++cursor[c];
            }
            for (uint32_t c = 0; c < ix.sigma_; ++c) ++cursor[c];
        }
        ix.cross_.reserve(ix.sigma_);
        for (uint32_t c = 0; c < ix.sigma_; ++c) ix.cross_.emplace_back(std::move(words[c]), totals[c] + nb);
        return ix;
    }

    uint64_t size() const noexcept { return n_; }
    uint32_t sigma() const noexcept { return sigma_; }
    uint32_t t() const noexcept { return t_; }
    uint32_t k() const noexcept { return k_; }
    uint64_t fingerprint() const noexcept { return fingerprint_; }
    uint64_t block_count() const noexcept { return (n_ + sigma_ - 1) / sigma_; }
    const std::vector<block_index>& blocks() const noexcept { return blocks_; }
    const rs_bitvector& cross(uint32_t c) const { return cross_.at(c); }

    /// Throws pairing_mismatch unless `text` is the sequence this index was built on.
    void check_pairing(const probed_text& text) const {
        if (text.size() != n_ || text.sigma() != sigma_ || text.fingerprint() != fingerprint_)
            throw error(errc::pairing_mismatch, "index was built for a different text");
    }

    uint32_t access(const probed_text& text, probe_session& session, uint64_t i) const {
        check_pairing(text);
        return text.access(session, i);
    }

    /// Position of the j-th (1-based) occurrence of c, or -1 when c occurs fewer than j times.
    int64_t select(const probed_text& text, probe_session& session, uint32_t c, uint64_t j) const {
        check_pairing(text);
        check_symbol(c);
        if (j == 0) throw error(errc::out_of_range, "select ordinal is 1-based");
        const rs_bitvector& v = cross_[c];
        if (j > v.ones()) return -1;
        const uint64_t b = *v.select1(j) - (j - 1);
        const uint64_t local = j - ones_before_block(v, b);
        const uint64_t from = b * sigma_;
        const uint64_t x = blocks_[b].select(c, local, [&](uint64_t i) { return text.access(session, from + i); });
        return static_cast<int64_t>(from + x);
    }

    /// Occurrences of c in s[0, p).
    uint64_t rank(const probed_text& text, probe_session& session, uint32_t c, uint64_t p) const {
        check_pairing(text);
        check_symbol(c);
        if (p > n_) throw error(errc::out_of_range, "rank position " + std::to_string(p) + " > n " + std::to_string(n_));
        const rs_bitvector& v = cross_[c];
        const uint64_t b = p / sigma_;
        if (b == blocks_.size()) return v.ones();
        const uint64_t before = ones_before_block(v, b);
        const uint64_t offset = p - b * sigma_;
        if (offset == 0) return before;
        const uint64_t from = b * sigma_;
        return before + blocks_[b].rank(c, offset, [&](uint64_t i) { return text.access(session, from + i); });
    }

    space_report space() const {
        space_report r;
        r.header_bits = header_bits;
        for (const auto& v : cross_) r.cross_bits += v.bits();
        for (const auto& b : blocks_) {
            r.z_bits += b.z().bits();
            r.locator_bits += b.present().bits();
            r.mmphf_bits += b.mmphf_bits();
            r.pred_bits += b.pred_bits();
            r.shortcut_bits += b.shortcuts().target_bits();
            r.mark_bits += b.shortcuts().mark_bits();
            r.fallback_buckets += b.fallback_buckets();
        }
        return r;
    }

    /// Index file: magic, version, n, sigma, t, k, fingerprint, section table,
    /// sections. Little-endian throughout; the text is never embedded.
    std::string serialize() const {
        byte_writer out;
        out.put_bytes(std::string_view(magic, 4));
        out.put_u8(version);
        out.put_u64(n_);
        out.put_u32(sigma_);
        out.put_u32(t_);
        out.put_u32(k_);
        out.put_u64(fingerprint_);
        out.put_u32(2);
        const size_t table = out.size();
        for (uint32_t tag : {cross_section_tag, block_section_tag}) {
            out.put_u32(tag);
            out.put_u64(0);
            out.put_u64(0);
        }
        const size_t cross_at = out.size();
        for (const auto& v : cross_) v.serialize(out);
        const size_t blocks_at = out.size();
        for (const auto& b : blocks_) b.serialize(out);
        const size_t end = out.size();
        out.patch_u64(table + 4, cross_at);
        out.patch_u64(table + 12, blocks_at - cross_at);
        out.patch_u64(table + 20 + 4, blocks_at);
        out.patch_u64(table + 20 + 12, end - blocks_at);
        return out.take();
    }

    void serialize(std::ostream& sink) const {
        const std::string bytes = serialize();
        sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!sink) throw error(errc::io, "failed writing index");
    }

    static string_index deserialize(std::string_view bytes) {
        byte_reader in(bytes);
        if (in.remaining() < 4) throw error(errc::truncated, "missing magic");
        if (in.get_bytes(4) != std::string_view(magic, 4)) throw error(errc::bad_magic, "not an index file");
        if (const uint8_t v = in.get_u8(); v != version)
            throw error(errc::version_mismatch, "index version " + std::to_string(v) + ", expected " + std::to_string(version));
        string_index ix;
        ix.n_ = in.get_u64();
        ix.sigma_ = in.get_u32();
        ix.t_ = in.get_u32();
        ix.k_ = in.get_u32();
        ix.fingerprint_ = in.get_u64();
        if (ix.sigma_ < 2 || ix.sigma_ > ix.n_ || ix.t_ < 1 || ix.k_ < 1 || ix.k_ > max_k(ix.sigma_))
            throw error(errc::corrupt_index, "header parameters out of range");
        const uint32_t sections = in.get_u32();
        std::string_view cross_bytes, block_bytes;
        bool have_cross = false, have_blocks = false;
        for (uint32_t s = 0; s < sections; ++s) {
            const uint32_t tag = in.get_u32();
            const uint64_t offset = in.get_u64();
            const uint64_t length = in.get_u64();
            if (offset > bytes.size() || length > bytes.size() - offset)
                throw error(errc::truncated, "section " + std::to_string(tag) + " runs past end of file");
            const auto body = bytes.substr(offset, length);
            if (tag == cross_section_tag) cross_bytes = body, have_cross = true;
            else if (tag == block_section_tag) block_bytes = body, have_blocks = true;
        }
        if (!have_cross || !have_blocks) throw error(errc::corrupt_index, "missing section");

        // Every serialized block and bitvector takes at least 8 bytes.
        const uint64_t nb = ix.block_count();
        if (nb > block_bytes.size() / 8 || ix.sigma_ > cross_bytes.size() / 8)
            throw error(errc::truncated, "sections too short for the header's n and sigma");
        byte_reader blocks_in(block_bytes);
        ix.blocks_.reserve(nb);
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t len = std::min<uint64_t>(ix.sigma_, ix.n_ - b * ix.sigma_);
            ix.blocks_.push_back(block_index::deserialize(blocks_in, len, ix.sigma_, ix.t_, ix.k_));
        }
        if (!blocks_in.at_end()) throw error(errc::corrupt_index, "trailing bytes in block section");

        byte_reader cross_in(cross_bytes);
        ix.cross_.reserve(ix.sigma_);
        for (uint32_t c = 0; c < ix.sigma_; ++c) {
            ix.cross_.push_back(rs_bitvector::deserialize(cross_in));
            const rs_bitvector& v = ix.cross_.back();
            if (v.zeros() != nb) throw error(errc::corrupt_index, "block-count bitvector has the wrong number of blocks");
            uint64_t run = 0, b = 0;
            for (uint64_t i = 0; i < v.size(); ++i) {
                if (v[i]) {
                    ++run;
                } else {
                    if (ix.blocks_[b].count(c) != run) throw error(errc::corrupt_index, "block counts disagree with Z");
                    run = 0;
                    ++b;
                }
            }
            if (run != 0) throw error(errc::corrupt_index, "block-count bitvector must end with a zero");
        }
        if (!cross_in.at_end()) throw error(errc::corrupt_index, "trailing bytes in cross section");
        return ix;
    }

    static string_index deserialize(std::istream& source) {
        std::string bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
        if (source.bad()) throw error(errc::io, "failed reading index");
        return deserialize(std::string_view(bytes));
    }

    friend bool operator==(const string_index&, const string_index&) = default;

private:
    void check_symbol(uint32_t c) const {
        if (c >= sigma_) throw error(errc::bad_symbol, "character " + std::to_string(c) + " >= sigma " + std::to_string(sigma_));
    }

    static uint64_t ones_before_block(const rs_bitvector& v, uint64_t b) {
        return b == 0 ? 0 : *v.select0(b) + 1 - b;
    }

    uint64_t n_ = 0;
    uint32_t sigma_ = 0;
    uint32_t t_ = 1;
    uint32_t k_ = 1;
    uint64_t fingerprint_ = 0;
    std::vector<rs_bitvector> cross_;
    std::vector<block_index> blocks_;
};

} // namespace ssix
