#include "bwtglue/fm_index.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "wire_util.hpp"

namespace bwtglue {

namespace {
constexpr char kIndexMagic[4] = {'B', 'W', 'T', 'G'};
constexpr std::uint8_t kIndexVersion = 1;
}  // namespace

std::vector<std::uint32_t> build_suffix_array(std::string_view s) {
    const std::size_t n = s.size();
    std::vector<std::uint32_t> sa(n), rnk(n), tmp(n);
    if (n == 0) return sa;
    for (std::size_t i = 0; i < n; ++i) {
        sa[i] = static_cast<std::uint32_t>(i);
        rnk[i] = static_cast<unsigned char>(s[i]);
    }
    // prefix doubling; each round orders suffixes by their first 2k symbols
    for (std::size_t k = 1;; k *= 2) {
        auto cmp = [&](std::uint32_t a, std::uint32_t b) {
            if (rnk[a] != rnk[b]) return rnk[a] < rnk[b];
            std::uint32_t ra = a + k < n ? rnk[a + k] + 1 : 0;
            std::uint32_t rb = b + k < n ? rnk[b + k] + 1 : 0;
            return ra < rb;
        };
        std::sort(sa.begin(), sa.end(), cmp);
        tmp[sa[0]] = 0;
        for (std::size_t i = 1; i < n; ++i)
            tmp[sa[i]] = tmp[sa[i - 1]] + (cmp(sa[i - 1], sa[i]) ? 1 : 0);
        rnk.swap(tmp);
        if (rnk[sa[n - 1]] == n - 1) break;
    }
    return sa;
}

BwtIndex BwtIndex::build(std::string_view text, std::uint64_t sample_rate) {
    if (text.empty()) throw std::invalid_argument("cannot index an empty text");
    if (sample_rate == 0) throw std::invalid_argument("sample_rate must be >= 1");
    if (text.find(kSentinel) != std::string_view::npos)
        throw std::invalid_argument("text contains the reserved sentinel byte");

    BwtIndex idx;
    idx.n_ = text.size();
    idx.sample_rate_ = sample_rate;

    std::string s(text);
    s.push_back(kSentinel);
    const std::uint64_t N = s.size();
    std::vector<std::uint32_t> sa = build_suffix_array(s);

    idx.bwt_.resize(N);
    for (std::uint64_t r = 0; r < N; ++r)
        idx.bwt_[r] = sa[r] == 0 ? s[N - 1] : s[sa[r] - 1];

    std::array<bool, 256> present{};
    for (char c : text) present[static_cast<unsigned char>(c)] = true;
    for (int b = 1; b < 256; ++b)
        if (present[b]) idx.alphabet_.push_back(static_cast<char>(b));

    // locate(row r) = sa[r-1] with the suffix-starting-at-1 row wrapping to N
    for (std::uint64_t r = 0; r < N; ++r) {
        std::uint64_t pos = sa[r] == 0 ? N : sa[r];
        if ((pos - 1) % sample_rate == 0 || pos == N) {
            idx.locate_samples_.emplace(r + 1, pos);
            idx.antilocate_samples_.emplace(pos, r + 1);
        }
    }

    idx.finish_construction();
    return idx;
}

void BwtIndex::finish_construction() {
    sym_id_.fill(-1);
    sym_id_[static_cast<unsigned char>(kSentinel)] = 0;
    int next = 1;
    for (char c : alphabet_) sym_id_[static_cast<unsigned char>(c)] = next++;
    sigma_ = static_cast<std::uint64_t>(next);

    const std::uint64_t N = bwt_.size();
    const std::uint64_t nblocks = N / kRankBlock + 1;
    rank_blocks_.assign(nblocks * sigma_, 0);
    std::vector<std::uint64_t> running(sigma_, 0);
    std::uint64_t i = 0;
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        std::copy(running.begin(), running.end(), rank_blocks_.begin() + b * sigma_);
        std::uint64_t end = std::min<std::uint64_t>(N, (b + 1) * kRankBlock);
        for (; i < end; ++i) {
            int sid = symbol_id(bwt_[i]);
            if (sid < 0) throw FormatError("BWT contains a symbol outside the alphabet");
            ++running[sid];
        }
    }

    cum_counts_.assign(sigma_, 0);
    for (std::uint64_t sid = 1; sid < sigma_; ++sid)
        cum_counts_[sid] = cum_counts_[sid - 1] + running[sid - 1];

    sampled_positions_.clear();
    sampled_positions_.reserve(antilocate_samples_.size());
    for (const auto& [pos, row] : antilocate_samples_) sampled_positions_.push_back(pos);
    std::sort(sampled_positions_.begin(), sampled_positions_.end());
}

std::uint64_t BwtIndex::rank(char c, std::uint64_t row) const {
    if (row > row_count()) throw std::out_of_range("rank row out of range");
    int sid = symbol_id(c);
    if (sid < 0) return 0;
    std::uint64_t b = row / kRankBlock;
    std::uint64_t cnt = rank_blocks_[b * sigma_ + sid];
    for (std::uint64_t i = b * kRankBlock; i < row; ++i)
        if (bwt_[i] == c) ++cnt;
    return cnt;
}

std::uint64_t BwtIndex::cum_count(char c) const {
    int sid = symbol_id(c);
    if (sid < 0) throw std::invalid_argument("symbol not in index alphabet");
    return cum_counts_[sid];
}

std::uint64_t BwtIndex::lf(std::uint64_t row) const {
    if (row < 1 || row > row_count()) throw std::out_of_range("row out of range");
    char c = bwt_[row - 1];
    return cum_counts_[symbol_id(c)] + rank(c, row);
}

Interval BwtIndex::symbol_interval(char c) const {
    int sid = symbol_id(c);
    if (sid <= 0) return Interval::none();  // sentinel or absent symbol
    std::uint64_t lo = cum_counts_[sid] + 1;
    std::uint64_t hi = sid + 1 < static_cast<int>(sigma_) ? cum_counts_[sid + 1] : bwt_.size();
    if (lo > hi) return Interval::none();
    return Interval{lo, hi};
}

Interval BwtIndex::backward_search(std::string_view pattern) const {
    Interval iv = full_interval();
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        char c = *it;
        int sid = symbol_id(c);
        if (sid <= 0) return Interval::none();
        std::uint64_t lo = cum_counts_[sid] + rank(c, iv.lo - 1) + 1;
        std::uint64_t hi = cum_counts_[sid] + rank(c, iv.hi);
        if (lo > hi) return Interval::none();
        iv = Interval{lo, hi};
    }
    return iv;
}

std::uint64_t BwtIndex::locate(std::uint64_t row) const {
    if (row < 1 || row > row_count()) throw std::out_of_range("locate row out of range");
    std::uint64_t r = row;
    std::uint64_t steps = 0;
    for (;;) {
        auto it = locate_samples_.find(r);
        if (it != locate_samples_.end()) return it->second + steps;
        r = lf(r);
        if (++steps > row_count()) throw FormatError("locate walk found no sample");
    }
}

std::uint64_t BwtIndex::antilocate(std::uint64_t text_pos) const {
    if (text_pos < 1 || text_pos > row_count())
        throw std::out_of_range("antilocate position out of range");
    auto it = std::lower_bound(sampled_positions_.begin(), sampled_positions_.end(), text_pos);
    if (it == sampled_positions_.end()) throw FormatError("antilocate sample coverage hole");
    std::uint64_t row = antilocate_samples_.at(*it);
    for (std::uint64_t p = *it; p > text_pos; --p) row = lf(row);
    return row;
}

std::vector<std::uint64_t> BwtIndex::locate_all(const Interval& interval,
                                                std::uint64_t pattern_len) const {
    std::vector<std::uint64_t> out;
    if (interval.empty()) return out;
    if (interval.lo < 1 || interval.hi > row_count())
        throw std::out_of_range("interval outside index rows");
    out.reserve(interval.size());
    for (std::uint64_t r = interval.lo; r <= interval.hi; ++r) {
        std::uint64_t p = locate(r);
        std::uint64_t start = p == row_count() ? 1 : p + 1;
        if (pattern_len > 0 && start + pattern_len - 1 > n_) continue;
        out.push_back(start);
    }
    std::sort(out.begin(), out.end());
    return out;
}

char BwtIndex::symbol_at(std::uint64_t text_pos) const {
    return bwt_[antilocate(text_pos) - 1];
}

std::string BwtIndex::extract(std::uint64_t text_pos, std::uint64_t len) const {
    if (text_pos < 1 || text_pos > n_ + 1 || len > n_ || text_pos + len - 1 > n_)
        throw std::out_of_range("extract range out of bounds");
    std::string out;
    out.reserve(len);
    for (std::uint64_t k = 0; k < len; ++k) out.push_back(symbol_at(text_pos + k));
    return out;
}

std::string BwtIndex::reconstruct_text() const {
    // walk LF from the row holding the sentinel symbol; no samples involved
    std::string out(n_, '\0');
    std::uint64_t r = static_cast<std::uint64_t>(bwt_.find(kSentinel)) + 1;
    r = lf(r);
    for (std::uint64_t p = n_; p >= 1; --p) {
        out[p - 1] = bwt_[r - 1];
        r = lf(r);
    }
    return out;
}

std::string BwtIndex::serialize() const {
    std::string out;
    out.append(kIndexMagic, 4);
    out.push_back(static_cast<char>(kIndexVersion));
    wire::put_u64(out, n_);
    wire::put_u64(out, alphabet_.size());
    wire::put_u64(out, sample_rate_);
    out += alphabet_;
    out += bwt_;

    std::vector<std::pair<std::uint64_t, std::uint64_t>> loc(locate_samples_.begin(),
                                                             locate_samples_.end());
    std::sort(loc.begin(), loc.end());
    wire::put_u64(out, loc.size());
    for (const auto& [row, pos] : loc) {
        wire::put_u64(out, row);
        wire::put_u64(out, pos);
    }

    wire::put_u64(out, sampled_positions_.size());
    for (std::uint64_t pos : sampled_positions_) {
        wire::put_u64(out, pos);
        wire::put_u64(out, antilocate_samples_.at(pos));
    }

    wire::append_crc(out);
    return out;
}

BwtIndex BwtIndex::deserialize(std::string_view bytes) {
    wire::Reader rd(wire::check_crc(bytes));
    if (rd.bytes(4) != std::string_view(kIndexMagic, 4)) throw FormatError("bad index magic");
    if (rd.u8() != kIndexVersion) throw FormatError("unsupported index version");

    BwtIndex idx;
    idx.n_ = rd.u64();
    std::uint64_t asize = rd.u64();
    idx.sample_rate_ = rd.u64();
    if (idx.n_ == 0 || asize == 0 || asize > 255 || idx.sample_rate_ == 0)
        throw FormatError("implausible index header");
    idx.alphabet_ = std::string(rd.bytes(asize));
    for (std::size_t i = 0; i < idx.alphabet_.size(); ++i) {
        if (idx.alphabet_[i] == kSentinel) throw FormatError("sentinel in alphabet");
        if (i > 0 && static_cast<unsigned char>(idx.alphabet_[i - 1]) >=
                         static_cast<unsigned char>(idx.alphabet_[i]))
            throw FormatError("alphabet not sorted");
    }
    const std::uint64_t N = idx.n_ + 1;
    idx.bwt_ = std::string(rd.bytes(N));
    if (std::count(idx.bwt_.begin(), idx.bwt_.end(), kSentinel) != 1)
        throw FormatError("BWT must contain the sentinel exactly once");

    std::uint64_t nloc = rd.u64();
    if (nloc > N) throw FormatError("implausible locate sample count");
    bool have_pos1 = false;
    for (std::uint64_t i = 0; i < nloc; ++i) {
        std::uint64_t row = rd.u64();
        std::uint64_t pos = rd.u64();
        if (row < 1 || row > N || pos < 1 || pos > N) throw FormatError("sample out of range");
        if (!idx.locate_samples_.emplace(row, pos).second)
            throw FormatError("duplicate locate sample row");
        have_pos1 = have_pos1 || pos == 1;
    }
    std::uint64_t nanti = rd.u64();
    if (nanti > N) throw FormatError("implausible antilocate sample count");
    bool have_posN = false;
    for (std::uint64_t i = 0; i < nanti; ++i) {
        std::uint64_t pos = rd.u64();
        std::uint64_t row = rd.u64();
        if (row < 1 || row > N || pos < 1 || pos > N) throw FormatError("sample out of range");
        if (!idx.antilocate_samples_.emplace(pos, row).second)
            throw FormatError("duplicate antilocate sample position");
        have_posN = have_posN || pos == N;
    }
    if (!have_pos1 || !have_posN) throw FormatError("sample sets miss a required anchor");
    if (rd.remaining() != 0) throw FormatError("trailing bytes after index payload");

    idx.finish_construction();
    return idx;
}

void BwtIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    std::string bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

BwtIndex BwtIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed: " + path);
    return deserialize(bytes);
}

}  // namespace bwtglue
