#include "bwtglue/avl_grammar.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bwtglue/errors.hpp"
#include "wire_util.hpp"

namespace bwtglue {

namespace {
constexpr char kGrammarMagic[4] = {'S', 'L', 'P', 'G'};
constexpr std::uint8_t kGrammarVersion = 1;
constexpr std::uint64_t kMaxExpandLength = std::uint64_t{1} << 32;
}  // namespace

RuleId Grammar::checked(RuleId id) const {
    if (id >= rules_.size()) throw std::out_of_range("invalid rule id");
    return id;
}

RuleId Grammar::append_terminal_raw(char symbol) {
    RuleRec rec;
    rec.symbol = symbol;
    rules_.push_back(rec);
    return rules_.size() - 1;
}

RuleId Grammar::append_pair_raw(RuleId left, RuleId right) {
    RuleRec rec;
    rec.left = left;
    rec.right = right;
    std::uint64_t ll = rules_[left].exp_len, rl = rules_[right].exp_len;
    if (ll > std::numeric_limits<std::uint64_t>::max() - rl)
        throw FormatError("expansion length overflow");
    rec.exp_len = ll + rl;
    rec.height = 1 + std::max(rules_[left].height, rules_[right].height);
    rec.symbol = '\0';
    rules_.push_back(rec);
    return rules_.size() - 1;
}

RuleId Grammar::add_terminal(char symbol) {
    RuleId& slot = term_dedup_[static_cast<unsigned char>(symbol)];
    if (slot == kNoRule) slot = append_terminal_raw(symbol);
    return slot;
}

RuleId Grammar::add_pair(RuleId left, RuleId right) {
    checked(left);
    checked(right);
    auto [it, inserted] = pair_dedup_.try_emplace({left, right}, kNoRule);
    if (inserted) it->second = append_pair_raw(left, right);
    return it->second;
}

RuleId Grammar::join(RuleId a, RuleId b) {
    checked(a);
    checked(b);
    return join_rec(a, b);
}

RuleId Grammar::join_rec(RuleId a, RuleId b) {
    const std::uint32_t ha = rules_[a].height, hb = rules_[b].height;
    if (ha <= hb + 1 && hb <= ha + 1) return add_pair(a, b);

    if (ha > hb) {
        // descend the right spine of a; rebalance on the way out
        RuleId al = rules_[a].left, ar = rules_[a].right;
        RuleId c = join_rec(ar, b);
        if (rules_[c].height <= rules_[al].height + 1) return add_pair(al, c);
        // c outgrew al by exactly two; rotate
        RuleId cl = rules_[c].left, cr = rules_[c].right;
        if (rules_[cl].height <= rules_[cr].height)
            return add_pair(add_pair(al, cl), cr);
        return add_pair(add_pair(al, rules_[cl].left), add_pair(rules_[cl].right, cr));
    }

    RuleId bl = rules_[b].left, br = rules_[b].right;
    RuleId c = join_rec(a, bl);
    if (rules_[c].height <= rules_[br].height + 1) return add_pair(c, br);
    RuleId cl = rules_[c].left, cr = rules_[c].right;
    if (rules_[cr].height <= rules_[cl].height)
        return add_pair(cl, add_pair(cr, br));
    return add_pair(add_pair(cl, rules_[cr].left), add_pair(rules_[cr].right, br));
}

std::pair<RuleId, RuleId> Grammar::split(RuleId root, std::uint64_t k) {
    checked(root);
    if (k < 1 || k >= exp_len(root)) throw std::out_of_range("split position out of range");
    return split_rec(root, k);
}

std::pair<RuleId, RuleId> Grammar::split_rec(RuleId v, std::uint64_t k) {
    // 1 <= k < exp_len(v) implies v is a pair
    RuleId a = rules_[v].left, b = rules_[v].right;
    std::uint64_t la = rules_[a].exp_len;
    if (k == la) return {a, b};
    if (k < la) {
        auto [l, m] = split_rec(a, k);
        return {l, join_rec(m, b)};
    }
    auto [m, r] = split_rec(b, k - la);
    return {join_rec(a, m), r};
}

std::vector<RuleId> Grammar::split_patterns(RuleId root,
                                            std::span<const std::uint64_t> boundaries) {
    checked(root);
    if (boundaries.empty()) throw std::invalid_argument("boundaries must be nonempty");
    for (std::size_t i = 0; i < boundaries.size(); ++i)
        if (boundaries[i] == 0 || (i > 0 && boundaries[i] <= boundaries[i - 1]))
            throw std::invalid_argument("boundaries must be strictly increasing");
    if (boundaries.back() != exp_len(root))
        throw std::invalid_argument("boundaries must end at the total length");

    std::vector<RuleId> roots;
    roots.reserve(boundaries.size());
    RuleId rest = root;
    std::uint64_t consumed = 0;
    for (std::size_t h = 0; h + 1 < boundaries.size(); ++h) {
        auto [head, tail] = split(rest, boundaries[h] - consumed);
        roots.push_back(head);
        rest = tail;
        consumed = boundaries[h];
    }
    roots.push_back(rest);
    return roots;
}

RuleId Grammar::slice(RuleId root, std::uint64_t b, std::uint64_t len) {
    checked(root);
    if (b < 1 || len < 1 || b + len - 1 > exp_len(root))
        throw std::out_of_range("slice range out of bounds");
    RuleId part = root;
    if (b + len - 1 < exp_len(root)) part = split(root, b + len - 1).first;
    if (b > 1) part = split(part, b - 1).second;
    return part;
}

std::string Grammar::expand(RuleId root) const {
    checked(root);
    if (exp_len(root) > kMaxExpandLength)
        throw std::length_error("expansion too large to materialize");
    std::string out;
    out.reserve(exp_len(root));
    std::vector<RuleId> stack{root};
    while (!stack.empty()) {
        RuleId id = stack.back();
        stack.pop_back();
        const RuleRec& rec = rules_[id];
        if (rec.left == kNoRule) {
            out.push_back(rec.symbol);
        } else {
            stack.push_back(rec.right);
            stack.push_back(rec.left);
        }
    }
    return out;
}

std::vector<RuleId> Grammar::reachable(std::span<const RuleId> roots) const {
    std::vector<bool> seen(rules_.size(), false);
    std::vector<RuleId> stack;
    for (RuleId r : roots) {
        checked(r);
        stack.push_back(r);
    }
    std::vector<RuleId> out;
    while (!stack.empty()) {
        RuleId id = stack.back();
        stack.pop_back();
        if (seen[id]) continue;
        seen[id] = true;
        out.push_back(id);
        const RuleRec& rec = rules_[id];
        if (rec.left != kNoRule) {
            stack.push_back(rec.left);
            stack.push_back(rec.right);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Grammar::live_rule_count(std::span<const RuleId> roots) const {
    return reachable(roots).size();
}

void Grammar::set_roots(std::vector<RuleId> roots) {
    for (RuleId r : roots) checked(r);
    roots_ = std::move(roots);
}

Grammar from_lz77(const ParseResult& parse) {
    Grammar g;
    RuleId root = kNoRule;
    std::uint64_t built = 0;
    for (const Phrase& ph : parse.phrases) {
        RuleId piece;
        std::uint64_t len;
        if (ph.kind == Phrase::Kind::literal) {
            piece = g.add_terminal(ph.symbol);
            len = 1;
        } else {
            if (ph.src < 1 || ph.len < 1 || ph.src + ph.len - 1 > built)
                throw FormatError("copy phrase reaches outside the parsed prefix");
            piece = g.slice(root, ph.src, ph.len);
            len = ph.len;
        }
        root = root == kNoRule ? piece : g.join(root, piece);
        built += len;
    }
    if (!parse.pattern_boundaries.empty() && parse.total_length() != built)
        throw FormatError("pattern boundaries disagree with phrase lengths");
    if (root != kNoRule) g.set_roots({root});
    return g;
}

std::string serialize_grammar(const Grammar& grammar, std::span<const RuleId> roots,
                              std::vector<RuleId>* payload_roots) {
    // children-before-parents order over the rules reachable from roots
    std::unordered_map<RuleId, RuleId> payload_id;
    std::vector<RuleId> order;
    std::vector<std::pair<RuleId, bool>> stack;
    for (RuleId r : roots) stack.emplace_back(r, false);
    while (!stack.empty()) {
        auto [id, children_done] = stack.back();
        stack.pop_back();
        if (payload_id.count(id)) continue;
        if (children_done || grammar.is_terminal(id)) {
            payload_id.emplace(id, order.size());
            order.push_back(id);
        } else {
            stack.emplace_back(id, true);
            stack.emplace_back(grammar.right(id), false);
            stack.emplace_back(grammar.left(id), false);
        }
    }

    std::string out;
    out.append(kGrammarMagic, 4);
    out.push_back(static_cast<char>(kGrammarVersion));
    wire::put_u64(out, order.size());
    for (RuleId id : order) {
        if (grammar.is_terminal(id)) {
            out.push_back(static_cast<char>(0));
            out.push_back(grammar.symbol(id));
        } else {
            out.push_back(static_cast<char>(1));
            wire::put_u64(out, payload_id.at(grammar.left(id)));
            wire::put_u64(out, payload_id.at(grammar.right(id)));
        }
    }
    wire::put_u64(out, roots.size());
    if (payload_roots) payload_roots->clear();
    for (RuleId r : roots) {
        wire::put_u64(out, payload_id.at(r));
        if (payload_roots) payload_roots->push_back(payload_id.at(r));
    }
    wire::append_crc(out);
    return out;
}

Grammar deserialize_grammar(std::string_view bytes) {
    wire::Reader rd(wire::check_crc(bytes));
    if (rd.bytes(4) != std::string_view(kGrammarMagic, 4)) throw FormatError("bad grammar magic");
    if (rd.u8() != kGrammarVersion) throw FormatError("unsupported grammar version");

    std::uint64_t count = rd.u64();
    if (count > rd.remaining()) throw FormatError("implausible rule count");
    Grammar g;
    g.rules_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint8_t tag = rd.u8();
        if (tag == 0) {
            char sym = static_cast<char>(rd.u8());
            RuleId id = g.append_terminal_raw(sym);
            // keep payload numbering; dedup table points at first occurrence
            RuleId& slot = g.term_dedup_[static_cast<unsigned char>(sym)];
            if (slot == kNoRule) slot = id;
        } else if (tag == 1) {
            std::uint64_t l = rd.u64(), r = rd.u64();
            if (l >= i || r >= i)
                throw FormatError("pair rule references a later rule");
            RuleId id = g.append_pair_raw(l, r);
            g.pair_dedup_.try_emplace({l, r}, id);
        } else {
            throw FormatError("unknown rule tag");
        }
    }

    std::uint64_t nroots = rd.u64();
    if (nroots > count) throw FormatError("implausible root count");
    std::vector<RuleId> roots;
    roots.reserve(nroots);
    for (std::uint64_t i = 0; i < nroots; ++i) {
        std::uint64_t r = rd.u64();
        if (r >= count) throw FormatError("dangling root id");
        roots.push_back(r);
    }
    if (rd.remaining() != 0) throw FormatError("trailing bytes after grammar payload");
    g.set_roots(std::move(roots));
    return g;
}

}  // namespace bwtglue
