#include "gract/trajectory_index.hpp"

#include "gract/dataset.hpp"
#include "gract/error.hpp"
#include "gract/movement.hpp"
#include "gract/repair.hpp"
#include "gract/scdc.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace gract {

std::string_view to_string(CompressionMode m) { return m == CompressionMode::Scdc ? "scdc" : "gract"; }

Rect expand_region(const Rect& rect, std::uint64_t dt, std::uint32_t v_max, std::uint32_t width,
                   std::uint32_t height) {
    const auto grow = static_cast<std::int64_t>(dt * v_max);
    return Rect{rect.x1 - grow, rect.y1 - grow, rect.x2 + grow, rect.y2 + grow}.clipped(width, height);
}

namespace {

struct PeriodLog {
    std::vector<std::uint64_t> ints;
    std::vector<bool> event_part;   // integers that belong to a reappearance
    bool reappears = false;
};

// Events of object o from snapshot instant a through instant b.
PeriodLog make_period_log(const RegularDataset& ds, ObjectId o, Instant a, Instant b, const AbsentInfo* absent,
                          std::uint32_t& v_max) {
    PeriodLog log;
    std::int64_t last_t;
    Cell last;
    if (auto c = ds.at(o, a)) {
        last = *c;
        last_t = a;
    } else {
        last = absent->last_cell;
        last_t = absent->last_instant;
    }
    for (Instant t = a + 1; t <= b && t > a; ++t) {
        auto c = ds.at(o, t);
        if (!c) continue;
        const Offset d{std::int64_t{c->x} - last.x, std::int64_t{c->y} - last.y};
        LogEvent e;
        if (last_t == std::int64_t{t} - 1) {
            e = Move{spiral_encode(d)};
            v_max = std::max(v_max, static_cast<std::uint32_t>(chebyshev(d)));
        } else {
            const auto gap = static_cast<std::uint64_t>(std::int64_t{t} - last_t - 1);
            if (last_t >= std::int64_t{a})
                e = RelReappear{gap, spiral_encode(d)};
            else
                e = AbsReappear{gap, c->x, c->y};
            log.reappears = true;
        }
        append_event_ints(e, log.ints, &log.event_part);
        last = *c;
        last_t = t;
    }
    return log;
}

// Replays a period log from its snapshot state and checks it against the data.
void verify_replay(const RegularDataset& ds, ObjectId o, Instant a, Instant b, const AbsentInfo* absent,
                   std::span<const std::uint64_t> ints) {
    TrackState s;
    bool present = false;
    if (auto c = ds.at(o, a)) {
        s = {*c, a};
        present = true;
    } else {
        s = {absent->last_cell, absent->last_instant};
    }
    for (const auto& e : ints_to_events(ints)) {
        s = apply_event(s, e, ds.width(), ds.height());
        present = true;
        auto expect = ds.at(o, static_cast<Instant>(s.instant));
        if (!expect || *expect != s.cell) throw CorruptionError("log replay diverges for object " + std::to_string(o));
    }
    const bool at_end = present && s.instant == std::int64_t{b};
    if (at_end != ds.present(o, b)) throw CorruptionError("log replay disagrees with the next snapshot");
}

} // namespace

TrajectoryIndex TrajectoryIndex::build(const RegularDataset& ds, const BuildConfig& cfg) {
    if (cfg.period < 2) throw ValidationError("snapshot period must be at least 2");
    if (ds.num_instants() == 0) throw ValidationError("dataset has no instants");
    if (ds.width() == 0 || ds.height() == 0) throw ValidationError("dataset grid is empty");

    const std::uint32_t n = ds.num_objects();
    const std::uint32_t T = ds.num_instants();
    const std::uint32_t P = (T - 1) / cfg.period + 1;

    TrajectoryIndex idx;
    auto& h = idx.header_;
    h.grid_width = ds.width();
    h.grid_height = ds.height();
    h.num_objects = n;
    h.num_instants = T;
    h.period = cfg.period;
    h.mode = cfg.mode;
    h.k = cfg.k;
    h.dac_span_bits = cfg.dac_span_bits;
    h.dac_coord_bits = cfg.dac_coord_bits;
    h.inverse_sample = cfg.inverse_sample;
    h.present_records = ds.present_records();
    idx.names_ = ds.names();
    idx.rebuild_name_map();
    if (idx.name_to_id_.size() != n) throw ValidationError("object names must be unique");

    // Snapshots, tracking the last sighting of every object.
    std::vector<Cell> last_cell(n);
    std::vector<std::int64_t> last_t(n, AbsentInfo::kNeverSeen);
    std::vector<PresentEntry> present;
    std::vector<AbsentEntry> absent;
    for (Instant t = 0; t < T; ++t) {
        if (t % cfg.period == 0) {
            present.clear();
            absent.clear();
            for (ObjectId o = 0; o < n; ++o) {
                if (auto c = ds.at(o, t))
                    present.push_back({o, *c});
                else
                    absent.push_back({o, {last_cell[o], last_t[o]}});
            }
            idx.snapshots_.push_back(
                Snapshot::build(t, n, present, absent, ds.width(), ds.height(), cfg.k, cfg.inverse_sample));
        }
        for (ObjectId o = 0; o < n; ++o) {
            if (auto c = ds.at(o, t)) {
                last_cell[o] = *c;
                last_t[o] = t;
            }
        }
    }

    // Period logs, laid out period-major.
    std::vector<std::vector<std::uint64_t>> streams;
    std::vector<std::vector<bool>> event_parts;
    streams.reserve(std::size_t{P} * n);
    BitBuilder reappears;
    std::uint32_t v_max = 0;
    for (std::uint32_t i = 0; i < P; ++i) {
        const Instant a = i * cfg.period;
        const Instant b = std::min<std::uint64_t>(std::uint64_t{a} + cfg.period, T - 1);
        const Snapshot& snap = idx.snapshots_[i];
        for (ObjectId o = 0; o < n; ++o) {
            auto info = snap.absent_info(o);
            PeriodLog log = make_period_log(ds, o, a, b, info ? &*info : nullptr, v_max);
            verify_replay(ds, o, a, b, info ? &*info : nullptr, log.ints);
            reappears.push_back(log.reappears);
            streams.push_back(std::move(log.ints));
            event_parts.push_back(std::move(log.event_part));
        }
    }
    h.v_max = v_max;
    idx.reappears_ = BitVector(std::move(reappears));

    std::vector<std::uint64_t> offsets{0};
    offsets.reserve(streams.size() + 1);
    if (cfg.mode == CompressionMode::Scdc) {
        unsigned s = cfg.scdc_s;
        if (s == 0) {
            std::map<std::uint64_t, std::uint64_t> hist;
            for (const auto& st : streams)
                for (auto v : st) ++hist[v];
            s = hist.empty() ? 128 : scdc::choose_s(hist);
        }
        if (s < 1 || s > 255) throw ValidationError("SCDC stopper count must be in [1, 255]");
        h.scdc_s = s;
        for (const auto& st : streams) {
            for (auto v : st) scdc::encode_one(v, s, idx.scdc_bytes_);
            offsets.push_back(idx.scdc_bytes_.size());
        }
    } else {
        RepairResult rp = repair_compress(streams, event_parts, kCodeShift);
        idx.grammar_ = Grammar::enrich(rp.terminal_bound, rp.rules, cfg.dac_span_bits, cfg.dac_coord_bits);
        std::vector<std::uint64_t> flat;
        for (const auto& seq : rp.sequences) {
            flat.insert(flat.end(), seq.begin(), seq.end());
            offsets.push_back(flat.size());
        }
        idx.symbols_ = IntVector::from_values(flat);
    }
    idx.offsets_ = IntVector::from_values(offsets);
    return idx;
}

void TrajectoryIndex::rebuild_name_map() {
    name_to_id_.clear();
    for (ObjectId o = 0; o < names_.size(); ++o) name_to_id_.emplace(names_[o], o);
}

const std::string& TrajectoryIndex::object_name(ObjectId o) const {
    check_object(o);
    return names_[o];
}

ObjectId TrajectoryIndex::object_id(std::string_view name) const {
    auto it = name_to_id_.find(std::string(name));
    if (it == name_to_id_.end()) throw NotFoundError("unknown object '" + std::string(name) + "'");
    return it->second;
}

void TrajectoryIndex::check_object(ObjectId o) const {
    if (o >= header_.num_objects) throw NotFoundError("unknown object " + std::to_string(o));
}

void TrajectoryIndex::check_instant(Instant t) const {
    if (t >= header_.num_instants)
        throw RangeError("instant " + std::to_string(t) + " beyond the last instant " +
                         std::to_string(header_.num_instants - 1));
}

LogView TrajectoryIndex::log_view(ObjectId o, std::uint32_t period) const {
    const std::size_t slot = std::size_t{period} * header_.num_objects + o;
    LogView v;
    v.mode = header_.mode;
    v.begin = static_cast<std::size_t>(offsets_[slot]);
    v.end = static_cast<std::size_t>(offsets_[slot + 1]);
    v.bytes = scdc_bytes_;
    v.symbols = &symbols_;
    v.scdc_s = header_.scdc_s;
    return v;
}

bool TrajectoryIndex::log_has_reappearance(ObjectId o, std::uint32_t period) const {
    check_object(o);
    if (period >= num_periods()) throw RangeError("period out of range");
    return reappears_[std::size_t{period} * header_.num_objects + o];
}

std::vector<ObjectId> TrajectoryIndex::reappearing_objects(std::uint32_t period) const {
    std::vector<ObjectId> out;
    const std::size_t lo = std::size_t{period} * header_.num_objects;
    const std::size_t first = reappears_.rank1(lo);
    const std::size_t last = reappears_.rank1(lo + header_.num_objects);
    for (std::size_t j = first + 1; j <= last; ++j) out.push_back(static_cast<ObjectId>(reappears_.select1(j) - lo));
    return out;
}

std::vector<Symbol> TrajectoryIndex::log_symbols(ObjectId o, std::uint32_t period) const {
    check_object(o);
    if (period >= num_periods()) throw RangeError("period out of range");
    const LogView v = log_view(o, period);
    if (v.mode == CompressionMode::Scdc) return log_ints(o, period);
    std::vector<Symbol> out;
    for (std::size_t i = v.begin; i < v.end; ++i) out.push_back(symbols_[i]);
    return out;
}

std::vector<std::uint64_t> TrajectoryIndex::log_ints(ObjectId o, std::uint32_t period) const {
    check_object(o);
    if (period >= num_periods()) throw RangeError("period out of range");
    const LogView v = log_view(o, period);
    std::vector<std::uint64_t> out;
    if (v.mode == CompressionMode::Scdc) {
        std::size_t pos = v.begin;
        while (pos < v.end) out.push_back(scdc::decode_next(v.bytes.subspan(0, v.end), pos, v.scdc_s));
    } else {
        for (std::size_t i = v.begin; i < v.end; ++i) {
            auto e = grammar_.expand(symbols_[i]);
            out.insert(out.end(), e.begin(), e.end());
        }
    }
    return out;
}

} // namespace gract
