#include "gract/error.hpp"
#include "gract/movement.hpp"
#include "gract/scdc.hpp"
#include "gract/trajectory_index.hpp"

#include <algorithm>
#include <string>

namespace gract {

namespace {

struct Token {
    enum class Kind { Move, RelReappear, AbsReappear };
    Kind kind = Kind::Move;
    Symbol sym = 0;
    std::uint64_t gap = 0;
    std::uint64_t code = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
};

// Reads one period log as tokens from the front, or move symbols from the back.
class LogCursor {
public:
    LogCursor(const LogView& v, QueryStats& stats) : v_(v), front_(v.begin), back_(v.end), stats_(stats) {}

    bool next(Token& tok) {
        std::uint64_t v;
        if (!next_raw(v)) return false;
        if (v == kRelReappearMark) {
            tok.kind = Token::Kind::RelReappear;
            tok.gap = payload();
            tok.code = payload() - kCodeShift;
        } else if (v == kAbsReappearMark) {
            tok.kind = Token::Kind::AbsReappear;
            tok.gap = payload();
            tok.x = static_cast<std::int64_t>(payload());
            tok.y = static_cast<std::int64_t>(payload());
        } else {
            tok.kind = Token::Kind::Move;
            tok.sym = v;
        }
        return true;
    }

    // Only valid on logs without reappearance events.
    bool prev_move(Symbol& sym) {
        if (back_ <= v_.begin) return false;
        ++stats_.symbols_processed;
        if (v_.mode == CompressionMode::Scdc)
            sym = scdc::decode_prev(v_.bytes, v_.begin, back_, v_.scdc_s);
        else
            sym = (*v_.symbols)[--back_];
        if (sym < kCodeShift) throw CorruptionError("reappearance marker met while reading a log backwards");
        return true;
    }

private:
    bool next_raw(std::uint64_t& v) {
        if (front_ >= v_.end) return false;
        ++stats_.symbols_processed;
        if (v_.mode == CompressionMode::Scdc)
            v = scdc::decode_next(v_.bytes.subspan(0, v_.end), front_, v_.scdc_s);
        else
            v = (*v_.symbols)[front_++];
        return true;
    }

    std::uint64_t payload() {
        std::uint64_t v;
        if (!next_raw(v)) throw CorruptionError("log ends inside a reappearance event");
        return v;
    }

    LogView v_;
    std::size_t front_;
    std::size_t back_;
    QueryStats& stats_;
};

// Position of a tracked object and the instant it refers to. `present` is false
// while the object is missing (cur is then its last sighting, -1 if never seen).
struct Track {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t cur = -1;
    bool present = false;

    Cell cell() const { return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)}; }

    void advance(const RuleMeta& m) {
        x += m.disp.dx;
        y += m.disp.dy;
        cur += static_cast<std::int64_t>(m.span);
    }
    void retreat(const RuleMeta& m) {
        x -= m.disp.dx;
        y -= m.disp.dy;
        cur -= static_cast<std::int64_t>(m.span);
    }
    // Applies a reappearance token.
    void reappear(const Token& tok) {
        if (tok.kind == Token::Kind::RelReappear) {
            if (cur < 0) throw CorruptionError("relative reappearance of an object never seen");
            const Offset d = spiral_decode(tok.code);
            x += d.dx;
            y += d.dy;
        } else {
            x = tok.x;
            y = tok.y;
        }
        cur += static_cast<std::int64_t>(tok.gap) + 1;
        present = true;
    }
};

Track track_at_snapshot(const Snapshot& snap, ObjectId o) {
    if (auto c = snap.position_of(o)) return {c->x, c->y, snap.instant(), true};
    const AbsentInfo a = *snap.absent_info(o);
    return {a.last_cell.x, a.last_cell.y, a.last_instant, false};
}

class Walker {
public:
    Walker(const Grammar& g, QueryStats& stats) : g_(g), stats_(stats) {}

    RuleMeta meta(Symbol s) const {
        auto m = g_.meta(s);
        if (!m) throw CorruptionError("reappearance marker inside a move sequence");
        return *m;
    }

    RulePair open(Symbol s) {
        ++stats_.rules_expanded;
        stats_.symbols_processed += 2;
        return g_.rule(s);
    }

    bool terminal(Symbol s) const { return g_.is_terminal(s); }

    // Forward: t lies strictly inside sym, which starts at s.cur. Ends with s.cur == t.
    void descend_forward(Symbol sym, Track& s, std::int64_t t) {
        while (!terminal(sym)) {
            auto [l, r] = open(sym);
            const RuleMeta ml = meta(l);
            if (s.cur + static_cast<std::int64_t>(ml.span) < t) {
                s.advance(ml);
                sym = r;
            } else if (s.cur + static_cast<std::int64_t>(ml.span) == t) {
                s.advance(ml);
                return;
            } else {
                sym = l;
            }
        }
        s.advance(meta(sym));
    }

    // Backward: t lies strictly inside sym, which ends at s.cur. Ends with s.cur == t.
    void descend_backward(Symbol sym, Track& s, std::int64_t t) {
        while (!terminal(sym)) {
            auto [l, r] = open(sym);
            const RuleMeta mr = meta(r);
            if (s.cur - static_cast<std::int64_t>(mr.span) > t) {
                s.retreat(mr);
                sym = l;
            } else if (s.cur - static_cast<std::int64_t>(mr.span) == t) {
                s.retreat(mr);
                return;
            } else {
                sym = r;
            }
        }
        s.retreat(meta(sym));
    }

    std::optional<Cell> position_forward(LogCursor& log, Track s, std::int64_t t) {
        if (s.present && s.cur == t) return s.cell();
        Token tok;
        while (log.next(tok)) {
            if (tok.kind == Token::Kind::Move) {
                if (!s.present) throw CorruptionError("move event for a missing object");
                const RuleMeta m = meta(tok.sym);
                const std::int64_t end = s.cur + static_cast<std::int64_t>(m.span);
                if (end < t) {
                    s.advance(m);
                    continue;
                }
                if (end == t)
                    s.advance(m);
                else
                    descend_forward(tok.sym, s, t);
                return s.cell();
            }
            const std::int64_t back_at = s.cur + static_cast<std::int64_t>(tok.gap) + 1;
            if (back_at > t) return std::nullopt;
            s.reappear(tok);
            if (back_at == t) return s.cell();
        }
        return std::nullopt;
    }

    // s is present at s.cur >= t and the log holds only moves ending at s.cur.
    Cell position_backward(LogCursor& log, Track s, std::int64_t t) {
        Symbol sym;
        while (s.cur != t) {
            if (!log.prev_move(sym)) throw CorruptionError("log too short for backward traversal");
            const RuleMeta m = meta(sym);
            const std::int64_t start = s.cur - static_cast<std::int64_t>(m.span);
            if (start >= t)
                s.retreat(m);
            else
                descend_backward(sym, s, t);
        }
        return s.cell();
    }

    std::optional<Cell> slice_forward(LogCursor& log, Track s, std::int64_t t, const Rect& r, std::uint32_t v_max,
                                      bool reach, bool mbr) {
        Token tok;
        for (;;) {
            if (s.present && s.cur == t) return r.contains(s.x, s.y) ? std::optional(s.cell()) : std::nullopt;
            if (reach && s.present && r.chebyshev_to(s.x, s.y) > std::int64_t{v_max} * (t - s.cur))
                return std::nullopt;
            if (!log.next(tok)) return std::nullopt;
            if (tok.kind == Token::Kind::Move) {
                if (!s.present) throw CorruptionError("move event for a missing object");
                const RuleMeta m = meta(tok.sym);
                if (s.cur + static_cast<std::int64_t>(m.span) <= t) {
                    s.advance(m);
                    continue;
                }
                return slice_descend_forward(tok.sym, m, s, t, r, mbr);
            }
            if (s.cur + static_cast<std::int64_t>(tok.gap) + 1 > t) return std::nullopt;
            s.reappear(tok);
        }
    }

    std::optional<Cell> slice_backward(LogCursor& log, Track s, std::int64_t t, const Rect& r, std::uint32_t v_max,
                                       bool reach, bool mbr) {
        Symbol sym;
        for (;;) {
            if (s.cur == t) return r.contains(s.x, s.y) ? std::optional(s.cell()) : std::nullopt;
            if (reach && r.chebyshev_to(s.x, s.y) > std::int64_t{v_max} * (s.cur - t)) return std::nullopt;
            if (!log.prev_move(sym)) throw CorruptionError("log too short for backward traversal");
            const RuleMeta m = meta(sym);
            if (s.cur - static_cast<std::int64_t>(m.span) >= t) {
                s.retreat(m);
                continue;
            }
            return slice_descend_backward(sym, m, s, t, r, mbr);
        }
    }

    enum class Outcome { Selected, Continue };

    // Interval step for one symbol starting at s.cur < hi.
    Outcome interval_symbol(Symbol sym, const RuleMeta& m, Track& s, std::int64_t lo, std::int64_t hi,
                            const Rect& r, bool mbr) {
        const std::int64_t end = s.cur + static_cast<std::int64_t>(m.span);
        if (end < lo) {
            s.advance(m);
            return Outcome::Continue;
        }
        const bool inside = s.cur + 1 >= lo && end <= hi;
        if (inside && r.contains(s.x + m.disp.dx, s.y + m.disp.dy)) {
            s.advance(m);
            return Outcome::Selected;
        }
        if (terminal(sym) || (mbr && !r.intersects(m.mbr.translated(s.x, s.y)))) {
            s.advance(m);
            return Outcome::Continue;
        }
        auto [l, rr] = open(sym);
        if (interval_symbol(l, meta(l), s, lo, hi, r, mbr) == Outcome::Selected) return Outcome::Selected;
        if (s.cur >= hi) return Outcome::Continue;
        return interval_symbol(rr, meta(rr), s, lo, hi, r, mbr);
    }

    bool interval_forward(LogCursor& log, Track s, std::int64_t lo, std::int64_t hi, const Rect& r,
                          std::uint32_t v_max, bool reach, bool mbr) {
        if (s.present && s.cur >= lo && s.cur <= hi && r.contains(s.x, s.y)) return true;
        Token tok;
        for (;;) {
            if (s.cur >= hi) return false;
            if (reach && s.present && r.chebyshev_to(s.x, s.y) > std::int64_t{v_max} * (hi - s.cur)) return false;
            if (!log.next(tok)) return false;
            if (tok.kind == Token::Kind::Move) {
                if (!s.present) throw CorruptionError("move event for a missing object");
                if (interval_symbol(tok.sym, meta(tok.sym), s, lo, hi, r, mbr) == Outcome::Selected) return true;
                continue;
            }
            const std::int64_t back_at = s.cur + static_cast<std::int64_t>(tok.gap) + 1;
            if (back_at > hi) return false;
            s.reappear(tok);
            if (back_at >= lo && r.contains(s.x, s.y)) return true;
        }
    }

    // Emits every instant of [lo, hi] reached by the symbol into out[instant - lo].
    void emit(Symbol sym, const RuleMeta& m, Track& s, std::int64_t lo, std::int64_t hi,
              std::vector<std::optional<Cell>>& out) {
        if (s.cur + static_cast<std::int64_t>(m.span) < lo) {
            s.advance(m);
            return;
        }
        if (terminal(sym)) {
            s.advance(m);
            if (s.cur >= lo && s.cur <= hi) out[static_cast<std::size_t>(s.cur - lo)] = s.cell();
            return;
        }
        auto [l, r] = open(sym);
        emit(l, meta(l), s, lo, hi, out);
        if (s.cur >= hi) return;
        emit(r, meta(r), s, lo, hi, out);
    }

    void trajectory_forward(LogCursor& log, Track s, std::int64_t lo, std::int64_t hi,
                            std::vector<std::optional<Cell>>& out) {
        if (s.present && s.cur >= lo && s.cur <= hi) out[static_cast<std::size_t>(s.cur - lo)] = s.cell();
        Token tok;
        while (s.cur < hi && log.next(tok)) {
            if (tok.kind == Token::Kind::Move) {
                if (!s.present) throw CorruptionError("move event for a missing object");
                emit(tok.sym, meta(tok.sym), s, lo, hi, out);
                continue;
            }
            s.reappear(tok);
            if (s.cur >= lo && s.cur <= hi) out[static_cast<std::size_t>(s.cur - lo)] = s.cell();
        }
    }

private:
    std::optional<Cell> slice_descend_forward(Symbol sym, RuleMeta m, Track& s, std::int64_t t, const Rect& r,
                                              bool mbr) {
        for (;;) {
            if (mbr && !r.intersects(m.mbr.translated(s.x, s.y))) return std::nullopt;
            if (terminal(sym)) {
                s.advance(m);
                break;
            }
            auto [l, rr] = open(sym);
            const RuleMeta ml = meta(l);
            const std::int64_t mid = s.cur + static_cast<std::int64_t>(ml.span);
            if (mid < t) {
                s.advance(ml);
                sym = rr;
                m = meta(rr);
            } else if (mid == t) {
                s.advance(ml);
                break;
            } else {
                sym = l;
                m = ml;
            }
        }
        return r.contains(s.x, s.y) ? std::optional(s.cell()) : std::nullopt;
    }

    std::optional<Cell> slice_descend_backward(Symbol sym, RuleMeta m, Track& s, std::int64_t t, const Rect& r,
                                               bool mbr) {
        for (;;) {
            if (mbr && !r.intersects(m.mbr.translated(s.x - m.disp.dx, s.y - m.disp.dy))) return std::nullopt;
            if (terminal(sym)) {
                s.retreat(m);
                break;
            }
            auto [l, rr] = open(sym);
            const RuleMeta mr = meta(rr);
            const std::int64_t mid = s.cur - static_cast<std::int64_t>(mr.span);
            if (mid > t) {
                s.retreat(mr);
                sym = l;
                m = meta(l);
            } else if (mid == t) {
                s.retreat(mr);
                break;
            } else {
                sym = rr;
                m = mr;
            }
        }
        return r.contains(s.x, s.y) ? std::optional(s.cell()) : std::nullopt;
    }

    const Grammar& g_;
    QueryStats& stats_;
};

} // namespace

std::optional<Cell> replay_position(const Grammar& g, std::span<const Symbol> seq, Cell start, std::uint64_t dt,
                                    QueryStats* stats) {
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    const IntVector symbols = IntVector::from_values(seq);
    LogView v;
    v.mode = CompressionMode::GraCT;
    v.symbols = &symbols;
    v.end = symbols.size();
    LogCursor log(v, st);
    Walker w(g, st);
    return w.position_forward(log, {start.x, start.y, 0, true}, static_cast<std::int64_t>(dt));
}

std::optional<Cell> TrajectoryIndex::position(ObjectId o, Instant t, QueryStats* stats,
                                              const QueryOptions& opts) const {
    check_object(o);
    check_instant(t);
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    const std::uint32_t i = t / header_.period;
    const Instant a = i * header_.period;
    if (t == a) return snapshots_[i].position_of(o);

    Walker w(grammar_, st);
    LogCursor log(log_view(o, i), st);
    const Instant b = a + header_.period;
    const bool backward = opts.traversal == Traversal::Nearest && i + 1 < num_periods() && b - t < t - a &&
                          !reappears_[std::size_t{i} * header_.num_objects + o];
    if (!backward) return w.position_forward(log, track_at_snapshot(snapshots_[i], o), t);

    Track s = track_at_snapshot(snapshots_[i + 1], o);
    if (!s.present && s.cur < std::int64_t{t}) return std::nullopt;
    return w.position_backward(log, s, t);
}

std::vector<TrajectoryPoint> TrajectoryIndex::trajectory(ObjectId o, Instant ts, Instant te, QueryStats* stats) const {
    check_object(o);
    check_instant(te);
    if (ts > te) throw RangeError("trajectory interval is reversed");
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    Walker w(grammar_, st);

    std::vector<TrajectoryPoint> out;
    out.reserve(te - ts + 1);
    for (std::uint32_t i = ts / header_.period; i <= te / header_.period; ++i) {
        const Instant a = i * header_.period;
        const Instant lo = std::max(ts, a);
        const Instant hi = std::min<Instant>(te, a + header_.period - 1);
        std::vector<std::optional<Cell>> cells(hi - lo + 1);
        LogCursor log(log_view(o, i), st);
        w.trajectory_forward(log, track_at_snapshot(snapshots_[i], o), lo, hi, cells);
        for (Instant t = lo; t <= hi; ++t) out.push_back({t, cells[t - lo]});
    }
    return out;
}

std::vector<ObjectAt> TrajectoryIndex::time_slice(const Rect& rect, Instant t, QueryStats* stats,
                                                  const QueryOptions& opts) const {
    check_instant(t);
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    const Rect r = rect.clipped(header_.grid_width, header_.grid_height);
    std::vector<ObjectAt> out;
    if (r.empty()) return out;

    const std::uint32_t i = t / header_.period;
    const Instant a = i * header_.period;
    const Snapshot& first = snapshots_[i];
    if (t == a) {
        out = first.objects_in_region(r);
        std::sort(out.begin(), out.end());
        return out;
    }

    Walker w(grammar_, st);
    const std::size_t slot0 = std::size_t{i} * header_.num_objects;
    auto flagged = [&](ObjectId o) { return reappears_[slot0 + o]; };
    auto keep = [&](ObjectId o, std::optional<Cell> c) {
        if (c) out.push_back({o, *c});
    };
    auto forward = [&](ObjectId o, Track s) {
        LogCursor log(log_view(o, i), st);
        keep(o, w.slice_forward(log, s, t, r, header_.v_max, opts.reach_pruning && !flagged(o), opts.mbr_pruning));
    };

    const Instant b = a + header_.period;
    const bool backward = opts.traversal == Traversal::Nearest && i + 1 < num_periods() && b - t < t - a;
    const std::vector<ObjectId> reappearing = reappearing_objects(i);
    for (ObjectId o : reappearing) forward(o, track_at_snapshot(first, o));

    if (!backward) {
        for (const auto& c : first.objects_in_region(expand_region(r, t - a, header_.v_max, header_.grid_width,
                                                                   header_.grid_height)))
            if (!flagged(c.object)) forward(c.object, {c.cell.x, c.cell.y, a, true});
    } else {
        const Snapshot& next = snapshots_[i + 1];
        auto backward_from = [&](ObjectId o, Track s) {
            LogCursor log(log_view(o, i), st);
            keep(o, w.slice_backward(log, s, t, r, header_.v_max, opts.reach_pruning, opts.mbr_pruning));
        };
        for (const auto& c : next.objects_in_region(expand_region(r, b - t, header_.v_max, header_.grid_width,
                                                                  header_.grid_height)))
            if (!flagged(c.object)) backward_from(c.object, {c.cell.x, c.cell.y, b, true});
        for (const auto& e : next.absent_entries()) {
            if (flagged(e.object) || e.info.never_seen() || e.info.last_instant < std::int64_t{t}) continue;
            const auto& lc = e.info.last_cell;
            if (opts.reach_pruning &&
                r.chebyshev_to(lc.x, lc.y) > std::int64_t{header_.v_max} * (e.info.last_instant - t))
                continue;
            backward_from(e.object, {lc.x, lc.y, e.info.last_instant, true});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ObjectId> TrajectoryIndex::time_interval(const Rect& rect, Instant ts, Instant te, QueryStats* stats,
                                                     const QueryOptions& opts) const {
    check_instant(te);
    if (ts > te) throw RangeError("time interval is reversed");
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    const Rect r = rect.clipped(header_.grid_width, header_.grid_height);
    if (r.empty()) return {};

    Walker w(grammar_, st);
    std::vector<std::uint8_t> selected(header_.num_objects, 0);
    for (std::uint32_t i = ts / header_.period; i <= te / header_.period; ++i) {
        const Instant a = i * header_.period;
        const Instant lo = std::max(ts, a);
        const Instant hi = std::min<Instant>(te, a + header_.period - 1);
        const Snapshot& snap = snapshots_[i];
        const std::size_t slot0 = std::size_t{i} * header_.num_objects;
        auto track = [&](ObjectId o, Track s) {
            if (selected[o]) return;
            LogCursor log(log_view(o, i), st);
            const bool reach = opts.reach_pruning && !reappears_[slot0 + o];
            if (w.interval_forward(log, s, lo, hi, r, header_.v_max, reach, opts.mbr_pruning)) selected[o] = 1;
        };
        for (ObjectId o : reappearing_objects(i)) track(o, track_at_snapshot(snap, o));
        for (const auto& c :
             snap.objects_in_region(expand_region(r, hi - a, header_.v_max, header_.grid_width, header_.grid_height)))
            track(c.object, {c.cell.x, c.cell.y, a, true});
    }
    std::vector<ObjectId> out;
    for (ObjectId o = 0; o < header_.num_objects; ++o)
        if (selected[o]) out.push_back(o);
    return out;
}

} // namespace gract
