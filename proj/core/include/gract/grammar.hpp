#ifndef GRACT_GRAMMAR_HPP
#define GRACT_GRAMMAR_HPP

#include "gract/byte_io.hpp"
#include "gract/dac_vector.hpp"
#include "gract/geometry.hpp"
#include "gract/int_vector.hpp"
#include "gract/repair.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace gract {

/// What a symbol does to an object when applied from a start cell taken as (0,0).
struct RuleMeta {
    std::uint64_t span = 0;   ///< instants covered
    Offset disp;              ///< net displacement
    Rect mbr;                 ///< bounding box of every visited cell, start included

    friend bool operator==(const RuleMeta&, const RuleMeta&) = default;
};

inline std::ostream& operator<<(std::ostream& o, const RuleMeta& m) {
    return o << "{" << m.span << ", " << m.disp << ", (" << m.mbr.x1 << "," << m.mbr.y1 << "," << m.mbr.x2 << ","
             << m.mbr.y2 << ")}";
}

/// Metadata of a single move terminal (stream value >= 2).
RuleMeta move_terminal_meta(Symbol terminal);

/// Metadata of `left` followed by `right`.
RuleMeta concat_meta(const RuleMeta& left, const RuleMeta& right);

/// A Re-Pair grammar whose rules carry time span, displacement and MBR.
///
/// Terminals below terminal_bound() are log stream integers; nonterminal
/// terminal_bound() + i is rule i. Rule bodies may only contain move terminals
/// and earlier nonterminals. Spans are kept in one DAC and the six zigzagged
/// coordinates of each rule (dx, dy, x1, y1, x2, y2) interleaved in another.
/// A default-constructed grammar has no rules and treats every symbol as a terminal.
class Grammar {
public:
    Grammar() = default;

    /// Computes the metadata bottom-up. Throws ValidationError if a rule
    /// references a reappearance terminal (0 or 1) or a later nonterminal.
    static Grammar enrich(Symbol terminal_bound, std::span<const RulePair> rules, unsigned span_chunk_bits = 8,
                          unsigned coord_chunk_bits = 8);

    Symbol terminal_bound() const { return terminal_bound_; }
    std::size_t num_rules() const { return left_.size(); }
    bool is_terminal(Symbol s) const { return s < terminal_bound_; }
    bool is_valid(Symbol s) const { return s < terminal_bound_ || s - terminal_bound_ < num_rules(); }

    RulePair rule(Symbol nonterminal) const;
    std::vector<RulePair> rules() const;

    /// Metadata without expansion; empty for the reappearance markers 0 and 1.
    std::optional<RuleMeta> meta(Symbol s) const;
    std::uint64_t span(Symbol s) const;

    std::vector<Symbol> expand(Symbol s) const;

    std::size_t serialized_bytes() const;
    void save(ByteWriter& out) const;
    static Grammar load(ByteReader& in);

private:
    Symbol terminal_bound_ = std::numeric_limits<Symbol>::max();
    IntVector left_;
    IntVector right_;
    DacVector spans_;
    DacVector coords_;
};

} // namespace gract

#endif // GRACT_GRAMMAR_HPP
