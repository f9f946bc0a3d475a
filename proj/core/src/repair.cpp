#include "gract/repair.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_map>

namespace gract {

namespace {

constexpr std::int64_t kNone = -1;

struct PairHash {
    std::size_t operator()(const RulePair& p) const {
        std::uint64_t h = p.first * 0x9E3779B97F4A7C15ULL;
        h ^= p.second + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct PairRecord {
    std::size_t count = 0;
    std::int64_t head = kNone;
};

struct HeapEntry {
    std::size_t count;
    RulePair pair;

    // Max-heap on count, then min on the pair.
    bool operator<(const HeapEntry& o) const {
        if (count != o.count) return count < o.count;
        return pair > o.pair;
    }
};

// Linked-list Re-Pair. Each live position links to its neighbours within its
// stream; every counted pair occurrence (identified by its left position) sits
// in a per-pair doubly linked list. For runs of one symbol only every other
// pair is counted, starting from the run's first position.
class RePair {
public:
    RePair(std::span<const std::vector<Symbol>> streams, std::span<const std::vector<bool>> unpairable,
           Symbol min_terminal_bound) {
        std::size_t n = 0;
        for (const auto& s : streams) n += s.size();
        sym_.reserve(n);
        Symbol bound = min_terminal_bound;
        for (std::size_t si = 0; si < streams.size(); ++si) {
            const auto& s = streams[si];
            if (!unpairable.empty() && unpairable[si].size() != s.size())
                throw ValidationError("unpairable mask does not match stream " + std::to_string(si));
            starts_.push_back(s.empty() ? kNone : static_cast<std::int64_t>(sym_.size()));
            for (std::size_t j = 0; j < s.size(); ++j) {
                const auto pos = static_cast<std::int64_t>(sym_.size());
                sym_.push_back(s[j]);
                prv_.push_back(j == 0 ? kNone : pos - 1);
                nxt_.push_back(j + 1 == s.size() ? kNone : pos + 1);
                pairable_.push_back(unpairable.empty() || !unpairable[si][j]);
                bound = std::max(bound, s[j] + 1);
            }
        }
        terminal_bound_ = bound;
        counted_.assign(sym_.size(), 0);
        occ_prev_.assign(sym_.size(), kNone);
        occ_next_.assign(sym_.size(), kNone);
    }

    RepairResult run() {
        for (std::int64_t start : starts_)
            for (std::int64_t i = start; i != kNone; i = nxt_[i])
                if (can_pair(i) && desired(i)) add_occ(i);

        while (!heap_.empty()) {
            HeapEntry top = heap_.top();
            heap_.pop();
            auto it = pairs_.find(top.pair);
            if (it == pairs_.end() || it->second.count != top.count) continue;
            if (top.count < 2) break;
            replace(top.pair);
        }

        RepairResult out;
        out.terminal_bound = terminal_bound_;
        out.rules = std::move(rules_);
        for (std::int64_t start : starts_) {
            auto& seq = out.sequences.emplace_back();
            for (std::int64_t i = start; i != kNone; i = nxt_[i]) seq.push_back(sym_[i]);
        }
        return out;
    }

private:
    bool can_pair(std::int64_t i) const {
        return i != kNone && nxt_[i] != kNone && pairable_[i] && pairable_[nxt_[i]];
    }

    RulePair pair_at(std::int64_t i) const { return {sym_[i], sym_[nxt_[i]]}; }

    bool desired(std::int64_t i) const {
        if (sym_[i] != sym_[nxt_[i]]) return true;
        const std::int64_t h = prv_[i];
        return !(h != kNone && can_pair(h) && sym_[h] == sym_[i] && counted_[h]);
    }

    void push(const RulePair& p, std::size_t count) {
        if (count >= 2) heap_.push({count, p});
    }

    void add_occ(std::int64_t i) {
        auto p = pair_at(i);
        auto& rec = pairs_[p];
        occ_prev_[i] = kNone;
        occ_next_[i] = rec.head;
        if (rec.head != kNone) occ_prev_[rec.head] = i;
        rec.head = i;
        counted_[i] = 1;
        push(p, ++rec.count);
    }

    void remove_occ(std::int64_t i) {
        if (!counted_[i]) return;
        auto p = pair_at(i);
        auto& rec = pairs_[p];
        if (occ_prev_[i] != kNone)
            occ_next_[occ_prev_[i]] = occ_next_[i];
        else
            rec.head = occ_next_[i];
        if (occ_next_[i] != kNone) occ_prev_[occ_next_[i]] = occ_prev_[i];
        occ_prev_[i] = occ_next_[i] = kNone;
        counted_[i] = 0;
        push(p, --rec.count);
    }

    // Re-evaluates the counted flag at i, then along the run of equal-symbol
    // pairs that follows it, until a flag is already correct.
    void refresh(std::int64_t i) {
        bool first = true;
        while (can_pair(i)) {
            bool d = desired(i);
            if (d == static_cast<bool>(counted_[i])) {
                if (!first) return;
            } else if (d) {
                add_occ(i);
            } else {
                remove_occ(i);
            }
            if (sym_[i] != sym_[nxt_[i]]) return;
            i = nxt_[i];
            if (!can_pair(i) || sym_[i] != sym_[nxt_[i]]) return;
            first = false;
        }
    }

    void replace(const RulePair& p) {
        const Symbol x = terminal_bound_ + rules_.size();
        rules_.push_back(p);
        std::vector<std::int64_t> occ;
        for (;;) {
            auto& rec = pairs_[p];
            if (rec.count == 0) break;
            occ.clear();
            for (std::int64_t i = rec.head; i != kNone; i = occ_next_[i]) occ.push_back(i);
            for (std::int64_t i : occ) {
                if (!counted_[i] || !can_pair(i) || pair_at(i) != p) continue;
                const std::int64_t j = nxt_[i];
                const std::int64_t h = prv_[i];
                const std::int64_t k = nxt_[j];
                if (h != kNone && can_pair(h)) remove_occ(h);
                remove_occ(i);
                if (can_pair(j)) remove_occ(j);
                sym_[i] = x;
                nxt_[i] = k;
                if (k != kNone) prv_[k] = i;
                prv_[j] = nxt_[j] = kNone;
                if (h != kNone) refresh(h);
                refresh(i);
                if (k != kNone) refresh(k);
            }
        }
        pairs_.erase(p);
    }

    std::vector<Symbol> sym_;
    std::vector<std::int64_t> prv_, nxt_, occ_prev_, occ_next_;
    std::vector<std::uint8_t> pairable_, counted_;
    std::vector<std::int64_t> starts_;
    std::unordered_map<RulePair, PairRecord, PairHash> pairs_;
    std::priority_queue<HeapEntry> heap_;
    std::vector<RulePair> rules_;
    Symbol terminal_bound_ = 0;
};

} // namespace

RepairResult repair_compress(std::span<const std::vector<Symbol>> streams, std::span<const std::vector<bool>> unpairable,
                             Symbol min_terminal_bound) {
    if (!unpairable.empty() && unpairable.size() != streams.size())
        throw ValidationError("unpairable masks must match the stream count");
    return RePair(streams, unpairable, min_terminal_bound).run();
}

std::vector<Symbol> repair_expand(std::span<const RulePair> rules, Symbol terminal_bound, Symbol sym) {
    if (sym >= terminal_bound + rules.size()) throw NotFoundError("unknown symbol " + std::to_string(sym));
    std::vector<Symbol> out;
    std::vector<Symbol> stack{sym};
    while (!stack.empty()) {
        Symbol s = stack.back();
        stack.pop_back();
        if (s < terminal_bound) {
            out.push_back(s);
        } else {
            const auto& r = rules[s - terminal_bound];
            stack.push_back(r.second);
            stack.push_back(r.first);
        }
    }
    return out;
}

} // namespace gract
