#include "gract/grammar.hpp"

#include "gract/error.hpp"
#include "gract/movement.hpp"

#include <algorithm>
#include <string>

namespace gract {

RuleMeta move_terminal_meta(Symbol terminal) {
    const Offset d = spiral_decode(terminal - kCodeShift);
    return {1, d, {std::min<std::int64_t>(0, d.dx), std::min<std::int64_t>(0, d.dy), std::max<std::int64_t>(0, d.dx),
                   std::max<std::int64_t>(0, d.dy)}};
}

RuleMeta concat_meta(const RuleMeta& a, const RuleMeta& b) {
    const Rect bm = b.mbr.translated(a.disp.dx, a.disp.dy);
    return {a.span + b.span,
            a.disp + b.disp,
            {std::min(a.mbr.x1, bm.x1), std::min(a.mbr.y1, bm.y1), std::max(a.mbr.x2, bm.x2),
             std::max(a.mbr.y2, bm.y2)}};
}

Grammar Grammar::enrich(Symbol terminal_bound, std::span<const RulePair> rules, unsigned span_chunk_bits,
                        unsigned coord_chunk_bits) {
    Grammar g;
    g.terminal_bound_ = terminal_bound;
    std::vector<RuleMeta> metas;
    metas.reserve(rules.size());
    auto meta_of = [&](Symbol s, std::size_t rule_index) -> RuleMeta {
        if (s < terminal_bound) {
            if (s < kCodeShift)
                throw ValidationError("rule " + std::to_string(rule_index) + " contains reappearance terminal " +
                                      std::to_string(s));
            return move_terminal_meta(s);
        }
        if (s - terminal_bound >= rule_index)
            throw ValidationError("rule " + std::to_string(rule_index) + " references a later nonterminal");
        return metas[s - terminal_bound];
    };
    std::vector<std::uint64_t> lefts, rights, spans, coords;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        RuleMeta a = meta_of(rules[i].first, i);
        RuleMeta b = meta_of(rules[i].second, i);
        metas.push_back(concat_meta(a, b));
        const auto& m = metas.back();
        lefts.push_back(rules[i].first);
        rights.push_back(rules[i].second);
        spans.push_back(m.span);
        for (std::int64_t v : {m.disp.dx, m.disp.dy, m.mbr.x1, m.mbr.y1, m.mbr.x2, m.mbr.y2})
            coords.push_back(zigzag(v));
    }
    g.left_ = IntVector::from_values(lefts);
    g.right_ = IntVector::from_values(rights);
    g.spans_ = DacVector(spans, span_chunk_bits);
    g.coords_ = DacVector(coords, coord_chunk_bits);
    return g;
}

RulePair Grammar::rule(Symbol nt) const {
    if (is_terminal(nt) || !is_valid(nt)) throw NotFoundError("not a nonterminal: " + std::to_string(nt));
    const auto i = static_cast<std::size_t>(nt - terminal_bound_);
    return {left_[i], right_[i]};
}

std::vector<RulePair> Grammar::rules() const {
    std::vector<RulePair> out;
    out.reserve(num_rules());
    for (std::size_t i = 0; i < num_rules(); ++i) out.emplace_back(left_[i], right_[i]);
    return out;
}

std::optional<RuleMeta> Grammar::meta(Symbol s) const {
    if (is_terminal(s)) {
        if (s < kCodeShift) return std::nullopt;
        return move_terminal_meta(s);
    }
    if (!is_valid(s)) throw NotFoundError("unknown symbol " + std::to_string(s));
    const auto i = static_cast<std::size_t>(s - terminal_bound_);
    auto c = [&](std::size_t k) { return unzigzag(coords_[6 * i + k]); };
    return RuleMeta{spans_[i], {c(0), c(1)}, {c(2), c(3), c(4), c(5)}};
}

std::uint64_t Grammar::span(Symbol s) const {
    if (is_terminal(s)) return 1;
    if (!is_valid(s)) throw NotFoundError("unknown symbol " + std::to_string(s));
    return spans_[static_cast<std::size_t>(s - terminal_bound_)];
}

std::vector<Symbol> Grammar::expand(Symbol s) const {
    if (!is_valid(s)) throw NotFoundError("unknown symbol " + std::to_string(s));
    std::vector<Symbol> out;
    std::vector<Symbol> stack{s};
    while (!stack.empty()) {
        Symbol x = stack.back();
        stack.pop_back();
        if (is_terminal(x)) {
            out.push_back(x);
        } else {
            auto i = static_cast<std::size_t>(x - terminal_bound_);
            stack.push_back(right_[i]);
            stack.push_back(left_[i]);
        }
    }
    return out;
}

std::size_t Grammar::serialized_bytes() const {
    ByteWriter w;
    save(w);
    return w.size();
}

void Grammar::save(ByteWriter& out) const {
    out.u64(terminal_bound_);
    left_.save(out);
    right_.save(out);
    spans_.save(out);
    coords_.save(out);
}

Grammar Grammar::load(ByteReader& in) {
    Grammar g;
    g.terminal_bound_ = in.u64();
    g.left_ = IntVector::load(in);
    g.right_ = IntVector::load(in);
    g.spans_ = DacVector::load(in);
    g.coords_ = DacVector::load(in);
    const std::size_t n = g.left_.size();
    if (g.right_.size() != n || g.spans_.size() != n || g.coords_.size() != 6 * n)
        throw FormatError("grammar section sizes disagree");
    for (std::size_t i = 0; i < n; ++i) {
        for (Symbol s : {g.left_[i], g.right_[i]})
            if (s >= g.terminal_bound_ && s - g.terminal_bound_ >= i) throw FormatError("grammar rule is not acyclic");
    }
    return g;
}

} // namespace gract
