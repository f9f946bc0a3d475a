#ifndef GRACT_TRAJECTORY_INDEX_HPP
#define GRACT_TRAJECTORY_INDEX_HPP

#include "gract/bit_vector.hpp"
#include "gract/geometry.hpp"
#include "gract/grammar.hpp"
#include "gract/int_vector.hpp"
#include "gract/snapshot.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gract {

class RegularDataset;

enum class CompressionMode : std::uint8_t {
    Scdc = 0,    ///< logs as (s,c)-Dense Code bytes
    GraCT = 1,   ///< logs as Re-Pair sequences over one shared enriched grammar
};

std::string_view to_string(CompressionMode m);

struct BuildConfig {
    std::uint32_t period = 120;                   ///< instants between snapshots
    CompressionMode mode = CompressionMode::GraCT;
    std::uint32_t k = 2;                          ///< k^2-tree arity
    unsigned scdc_s = 0;                          ///< 0: pick the size-optimal s
    unsigned dac_span_bits = 8;
    unsigned dac_coord_bits = 8;
    std::uint32_t inverse_sample = 32;
};

struct IndexHeader {
    std::uint32_t grid_width = 0;
    std::uint32_t grid_height = 0;
    std::uint32_t num_objects = 0;
    std::uint32_t num_instants = 0;
    std::uint32_t period = 0;
    std::uint32_t v_max = 0;           ///< largest per-instant Chebyshev move over all Move events
    CompressionMode mode = CompressionMode::GraCT;
    std::uint32_t k = 2;
    std::uint32_t scdc_s = 0;          ///< 0 in GraCT mode
    std::uint32_t dac_span_bits = 8;
    std::uint32_t dac_coord_bits = 8;
    std::uint32_t inverse_sample = 32;
    std::uint64_t present_records = 0; ///< (object, instant) pairs with a position

    friend bool operator==(const IndexHeader&, const IndexHeader&) = default;
};

/// Work counters of one query.
struct QueryStats {
    std::uint64_t symbols_processed = 0;   ///< log symbols read plus grammar children visited
    std::uint64_t rules_expanded = 0;      ///< nonterminals opened

    QueryStats& operator+=(const QueryStats& o) {
        symbols_processed += o.symbols_processed;
        rules_expanded += o.rules_expanded;
        return *this;
    }
};

enum class Traversal {
    Nearest,   ///< start from the later snapshot when it is strictly closer
    Forward,   ///< always start from the preceding snapshot
};

struct QueryOptions {
    bool mbr_pruning = true;
    bool reach_pruning = true;
    Traversal traversal = Traversal::Nearest;
};

struct TrajectoryPoint {
    Instant instant = 0;
    std::optional<Cell> cell;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct SizeReport {
    std::uint64_t header_bytes = 0;
    std::uint64_t dictionary_bytes = 0;
    std::uint64_t snapshot_bytes = 0;
    std::uint64_t log_bytes = 0;       ///< compressed sequences, offsets and reappearance flags
    std::uint64_t grammar_bytes = 0;   ///< rules and their DAC metadata (GraCT only)
    std::uint64_t total_bytes = 0;
    std::uint64_t plain_bytes = 0;     ///< 2 x 4-byte coordinates per present record
    double ratio = 0.0;                ///< total / plain
};

/// Rectangle from which `rect` is reachable within dt instants at v_max cells
/// per instant, clipped to the grid.
Rect expand_region(const Rect& rect, std::uint64_t dt, std::uint32_t v_max, std::uint32_t width,
                   std::uint32_t height);

/// Where the log of one object in one period lives.
struct LogView {
    CompressionMode mode = CompressionMode::GraCT;
    std::span<const std::uint8_t> bytes;   // Scdc
    const IntVector* symbols = nullptr;    // GraCT
    std::size_t begin = 0;
    std::size_t end = 0;
    unsigned scdc_s = 0;
};

/// Position reached after replaying the move-only sequence `seq` (terminals and
/// nonterminals of `g`) for `dt` instants from `start`; empty if `seq` is shorter.
/// Whole symbols are skipped via their metadata; only the one covering `dt` is opened.
std::optional<Cell> replay_position(const Grammar& g, std::span<const Symbol> seq, Cell start, std::uint64_t dt,
                                    QueryStats* stats = nullptr);

/// Snapshots every `period` instants plus per-object compressed movement logs.
///
/// The log of object o in period i holds the events that move o from snapshot
/// instant a = i * period through every instant up to min(a + period, n - 1).
/// Built or loaded indexes are immutable; queries are safe from any number of
/// threads.
class TrajectoryIndex {
public:
    TrajectoryIndex() = default;

    static TrajectoryIndex build(const RegularDataset& data, const BuildConfig& cfg);

    const IndexHeader& header() const { return header_; }
    std::uint32_t num_periods() const { return static_cast<std::uint32_t>(snapshots_.size()); }
    const Snapshot& snapshot(std::uint32_t i) const { return snapshots_.at(i); }
    const Grammar& grammar() const { return grammar_; }

    const std::string& object_name(ObjectId o) const;
    /// Throws NotFoundError for an unknown name.
    ObjectId object_id(std::string_view name) const;

    std::optional<Cell> position(ObjectId o, Instant t, QueryStats* stats = nullptr,
                                 const QueryOptions& opts = {}) const;
    std::vector<TrajectoryPoint> trajectory(ObjectId o, Instant ts, Instant te, QueryStats* stats = nullptr) const;
    /// Objects inside the closed rectangle at t, ascending by id.
    std::vector<ObjectAt> time_slice(const Rect& rect, Instant t, QueryStats* stats = nullptr,
                                     const QueryOptions& opts = {}) const;
    /// Objects inside the closed rectangle at some instant of [ts, te], ascending.
    std::vector<ObjectId> time_interval(const Rect& rect, Instant ts, Instant te, QueryStats* stats = nullptr,
                                        const QueryOptions& opts = {}) const;

    /// Decoded integer stream of one object in one period.
    std::vector<std::uint64_t> log_ints(ObjectId o, std::uint32_t period) const;
    /// Stored symbols (C slice in GraCT mode, the integers themselves in Scdc mode).
    std::vector<Symbol> log_symbols(ObjectId o, std::uint32_t period) const;
    /// True if the period's log contains a reappearance event.
    bool log_has_reappearance(ObjectId o, std::uint32_t period) const;

    SizeReport stats() const;

    std::vector<std::uint8_t> serialize() const;
    static TrajectoryIndex load(std::span<const std::uint8_t> bytes);
    void save_file(const std::string& path) const;
    static TrajectoryIndex load_file(const std::string& path);

private:
    LogView log_view(ObjectId o, std::uint32_t period) const;
    void check_object(ObjectId o) const;
    void check_instant(Instant t) const;
    std::vector<ObjectId> reappearing_objects(std::uint32_t period) const;
    void rebuild_name_map();

    void write_header(ByteWriter& out) const;
    void write_dictionary(ByteWriter& out) const;
    void write_snapshots(ByteWriter& out) const;
    void write_logs(ByteWriter& out) const;

    IndexHeader header_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, ObjectId> name_to_id_;
    std::vector<Snapshot> snapshots_;
    IntVector offsets_;                    // (period * num_objects + o) -> start of log
    BitVector reappears_;                  // same indexing
    std::vector<std::uint8_t> scdc_bytes_;
    IntVector symbols_;
    Grammar grammar_;
};

} // namespace gract

#endif // GRACT_TRAJECTORY_INDEX_HPP
