#ifndef GRACT_REPAIR_HPP
#define GRACT_REPAIR_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gract {

using Symbol = std::uint64_t;
using RulePair = std::pair<Symbol, Symbol>;

/// Output of Re-Pair: rule i defines nonterminal terminal_bound + i.
struct RepairResult {
    Symbol terminal_bound = 0;
    std::vector<RulePair> rules;
    std::vector<std::vector<Symbol>> sequences;   ///< one compressed sequence C per input stream
};

/// Re-Pair over a set of streams sharing one grammar.
///
/// Repeatedly replaces the most frequent adjacent pair (non-overlapping
/// occurrences counted left to right; ties go to the lexicographically smallest
/// pair) until no pair occurs twice. Pairs never span two streams and never
/// cover a position flagged in `unpairable` (same shape as `streams`, may be
/// empty). `min_terminal_bound` lets the caller reserve terminal ids beyond the
/// largest value present.
RepairResult repair_compress(std::span<const std::vector<Symbol>> streams,
                             std::span<const std::vector<bool>> unpairable = {}, Symbol min_terminal_bound = 0);

/// Full terminal expansion of `sym` (a terminal expands to itself).
std::vector<Symbol> repair_expand(std::span<const RulePair> rules, Symbol terminal_bound, Symbol sym);

} // namespace gract

#endif // GRACT_REPAIR_HPP
