#include "gract/oracle.hpp"

#include "gract/error.hpp"

#include <string>

namespace gract {

void Oracle::check_object(ObjectId o) const {
    if (o >= ds_->num_objects()) throw NotFoundError("unknown object " + std::to_string(o));
}

void Oracle::check_instant(Instant t) const {
    if (t >= ds_->num_instants()) throw RangeError("instant " + std::to_string(t) + " out of range");
}

std::optional<Cell> Oracle::position(ObjectId o, Instant t) const {
    check_object(o);
    check_instant(t);
    return ds_->at(o, t);
}

std::vector<TrajectoryPoint> Oracle::trajectory(ObjectId o, Instant ts, Instant te) const {
    check_object(o);
    check_instant(te);
    if (ts > te) throw RangeError("trajectory interval is reversed");
    std::vector<TrajectoryPoint> out;
    for (Instant t = ts; t <= te; ++t) out.push_back({t, ds_->at(o, t)});
    return out;
}

std::vector<ObjectAt> Oracle::time_slice(const Rect& r, Instant t) const {
    check_instant(t);
    std::vector<ObjectAt> out;
    for (ObjectId o = 0; o < ds_->num_objects(); ++o)
        if (auto c = ds_->at(o, t); c && r.contains(c->x, c->y)) out.push_back({o, *c});
    return out;
}

std::vector<ObjectId> Oracle::time_interval(const Rect& r, Instant ts, Instant te) const {
    check_instant(te);
    if (ts > te) throw RangeError("time interval is reversed");
    std::vector<ObjectId> out;
    for (ObjectId o = 0; o < ds_->num_objects(); ++o) {
        for (Instant t = ts; t <= te; ++t) {
            if (auto c = ds_->at(o, t); c && r.contains(c->x, c->y)) {
                out.push_back(o);
                break;
            }
        }
    }
    return out;
}

} // namespace gract
