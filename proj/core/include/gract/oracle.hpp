#ifndef GRACT_ORACLE_HPP
#define GRACT_ORACLE_HPP

#include "gract/dataset.hpp"
#include "gract/geometry.hpp"
#include "gract/snapshot.hpp"
#include "gract/trajectory_index.hpp"

#include <optional>
#include <vector>

namespace gract {

/// Answers every query by scanning the uncompressed table. Ground truth for tests.
class Oracle {
public:
    explicit Oracle(const RegularDataset& ds) : ds_(&ds) {}

    std::optional<Cell> position(ObjectId o, Instant t) const;
    std::vector<TrajectoryPoint> trajectory(ObjectId o, Instant ts, Instant te) const;
    std::vector<ObjectAt> time_slice(const Rect& r, Instant t) const;
    std::vector<ObjectId> time_interval(const Rect& r, Instant ts, Instant te) const;

private:
    void check_object(ObjectId o) const;
    void check_instant(Instant t) const;

    const RegularDataset* ds_;
};

} // namespace gract

#endif // GRACT_ORACLE_HPP
