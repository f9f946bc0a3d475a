#ifndef GRACT_DATASET_HPP
#define GRACT_DATASET_HPP

#include "gract/byte_io.hpp"
#include "gract/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gract {

/// Raster and clock used to discretize raw positions.
struct GridConfig {
    double cell_size = 50.0;   ///< units per cell side
    double time_step = 60.0;   ///< seconds per instant
    double origin_x = 0.0;
    double origin_y = 0.0;
    double t0 = 0.0;           ///< timestamp of instant 0
    std::uint32_t width = 0;   ///< cells
    std::uint32_t height = 0;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct RawPing {
    std::string object_id;
    double timestamp = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// At most one cell per object and instant; objects are dense ids with external names.
class RegularDataset {
public:
    RegularDataset() = default;
    RegularDataset(GridConfig grid, std::uint32_t num_instants, std::vector<std::string> names);

    const GridConfig& grid() const { return grid_; }
    std::uint32_t width() const { return grid_.width; }
    std::uint32_t height() const { return grid_.height; }
    std::uint32_t num_instants() const { return num_instants_; }
    std::uint32_t num_objects() const { return static_cast<std::uint32_t>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<Cell> at(ObjectId o, Instant t) const {
        const Cell& c = cells_[index(o, t)];
        if (c.x < 0) return std::nullopt;
        return c;
    }
    bool present(ObjectId o, Instant t) const { return cells_[index(o, t)].x >= 0; }

    /// Throws ValidationError if the cell is outside the grid.
    void set(ObjectId o, Instant t, Cell c);
    void clear(ObjectId o, Instant t) { cells_[index(o, t)] = kAbsent; }

    std::uint64_t present_records() const;

    friend bool operator==(const RegularDataset&, const RegularDataset&) = default;

    /// Binary fixture format ("GRDS").
    void save(ByteWriter& out) const;
    static RegularDataset load(ByteReader& in);
    void save_file(const std::string& path) const;
    static RegularDataset load_file(const std::string& path);

private:
    static constexpr Cell kAbsent{-1, -1};
    std::size_t index(ObjectId o, Instant t) const {
        return static_cast<std::size_t>(o) * num_instants_ + t;
    }

    GridConfig grid_;
    std::uint32_t num_instants_ = 0;
    std::vector<std::string> names_;
    std::vector<Cell> cells_;
};

struct RegularizeResult {
    RegularDataset dataset;
    std::size_t dropped = 0;   ///< pings outside the grid or before t0
};

/// Grid covering every ping: origin at the minimum coordinates, t0 at the earliest timestamp.
GridConfig fit_grid(std::span<const RawPing> pings, double cell_size, double time_step);

/// Buckets pings into instants round((ts - t0) / time_step) and cells
/// floor((v - origin) / cell_size). Within a bucket the ping nearest the
/// instant's nominal time wins, ties to the earlier ping. Objects are numbered
/// in order of first appearance.
RegularizeResult regularize(std::span<const RawPing> pings, const GridConfig& grid);

/// One ping per present record, at the cell center and the instant's nominal time.
std::vector<RawPing> dataset_to_pings(const RegularDataset& ds);

/// Epoch seconds (optionally fractional) or ISO-8601 UTC, e.g. 2015-01-01T00:00:00Z.
double parse_timestamp(std::string_view text);

/// CSV with header row: objectId,timestamp,x,y.
std::vector<RawPing> read_pings_csv(std::istream& in);
void write_pings_csv(std::ostream& out, std::span<const RawPing> pings);

/// Relative weights of the synthetic behaviours plus gap settings.
struct BehaviorMix {
    double stationary = 0.2;
    double straight = 0.5;      ///< constant velocity with occasional small turns
    double random_walk = 0.3;
    double gap_fraction = 0.2;  ///< share of objects whose signal drops out
    double turn_probability = 0.02;
    std::int32_t max_speed = 2; ///< cells per instant along each axis
};

/// Deterministic for a given seed.
RegularDataset gen_synthetic(std::uint32_t num_objects, std::uint32_t num_instants, std::uint32_t width,
                             std::uint32_t height, const BehaviorMix& mix, std::uint64_t seed);

} // namespace gract

#endif // GRACT_DATASET_HPP
