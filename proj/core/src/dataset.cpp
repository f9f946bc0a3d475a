#include "gract/dataset.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace gract {

RegularDataset::RegularDataset(GridConfig grid, std::uint32_t num_instants, std::vector<std::string> names)
    : grid_(grid), num_instants_(num_instants), names_(std::move(names)) {
    if (grid_.width > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max()) ||
        grid_.height > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max()))
        throw ValidationError("grid too large");
    cells_.assign(names_.size() * std::size_t{num_instants_}, kAbsent);
}

void RegularDataset::set(ObjectId o, Instant t, Cell c) {
    if (o >= num_objects() || t >= num_instants_) throw RangeError("dataset record out of range");
    if (c.x < 0 || c.y < 0 || static_cast<std::uint32_t>(c.x) >= grid_.width ||
        static_cast<std::uint32_t>(c.y) >= grid_.height)
        throw ValidationError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") outside the grid");
    cells_[index(o, t)] = c;
}

std::uint64_t RegularDataset::present_records() const {
    return static_cast<std::uint64_t>(std::count_if(cells_.begin(), cells_.end(), [](Cell c) { return c.x >= 0; }));
}

namespace {

constexpr std::uint8_t kDatasetMagic[4] = {'G', 'R', 'D', 'S'};
constexpr std::uint16_t kDatasetVersion = 1;

void put_double(ByteWriter& out, double v) { out.u64(std::bit_cast<std::uint64_t>(v)); }
double get_double(ByteReader& in) { return std::bit_cast<double>(in.u64()); }

} // namespace

void RegularDataset::save(ByteWriter& out) const {
    out.bytes(kDatasetMagic);
    out.u16(kDatasetVersion);
    put_double(out, grid_.cell_size);
    put_double(out, grid_.time_step);
    put_double(out, grid_.origin_x);
    put_double(out, grid_.origin_y);
    put_double(out, grid_.t0);
    out.u32(grid_.width);
    out.u32(grid_.height);
    out.u32(num_instants_);
    out.u32(num_objects());
    for (const auto& n : names_) out.str(n);
    for (const Cell& c : cells_) {
        out.i32(c.x);
        out.i32(c.y);
    }
}

RegularDataset RegularDataset::load(ByteReader& in) {
    auto magic = in.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kDatasetMagic))) throw FormatError("not a dataset file");
    if (in.u16() != kDatasetVersion) throw FormatError("unsupported dataset version");
    GridConfig g;
    g.cell_size = get_double(in);
    g.time_step = get_double(in);
    g.origin_x = get_double(in);
    g.origin_y = get_double(in);
    g.t0 = get_double(in);
    g.width = in.u32();
    g.height = in.u32();
    const auto instants = in.u32();
    const auto n = in.u32();
    std::vector<std::string> names;
    for (std::uint32_t o = 0; o < n; ++o) names.push_back(in.str());
    if (std::uint64_t{n} * instants * 8 > in.remaining()) throw FormatError("truncated dataset");
    RegularDataset ds(g, instants, std::move(names));
    for (ObjectId o = 0; o < n; ++o) {
        for (Instant t = 0; t < instants; ++t) {
            const Cell c{in.i32(), in.i32()};
            if (c.x == kAbsent.x && c.y == kAbsent.y) continue;
            try {
                ds.set(o, t, c);
            } catch (const ValidationError& e) {
                throw FormatError(e.what());
            }
        }
    }
    return ds;
}

void RegularDataset::save_file(const std::string& path) const {
    ByteWriter w;
    save(w);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    f.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.size()));
    if (!f) throw FormatError("failed writing '" + path + "'");
}

RegularDataset RegularDataset::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    ByteReader in(bytes);
    auto ds = load(in);
    if (!in.at_end()) throw FormatError("trailing bytes in dataset file");
    return ds;
}

GridConfig fit_grid(std::span<const RawPing> pings, double cell_size, double time_step) {
    if (!(cell_size > 0) || !(time_step > 0)) throw ValidationError("cell size and time step must be positive");
    GridConfig g;
    g.cell_size = cell_size;
    g.time_step = time_step;
    if (pings.empty()) return g;
    double min_x = pings[0].x, max_x = min_x, min_y = pings[0].y, max_y = min_y, t0 = pings[0].timestamp;
    for (const auto& p : pings) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.timestamp))
            throw ValidationError("non-finite ping for object '" + p.object_id + "'");
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
        t0 = std::min(t0, p.timestamp);
    }
    g.origin_x = min_x;
    g.origin_y = min_y;
    g.t0 = t0;
    g.width = static_cast<std::uint32_t>(std::floor((max_x - min_x) / cell_size)) + 1;
    g.height = static_cast<std::uint32_t>(std::floor((max_y - min_y) / cell_size)) + 1;
    return g;
}

RegularizeResult regularize(std::span<const RawPing> pings, const GridConfig& grid) {
    if (!(grid.cell_size > 0) || !(grid.time_step > 0)) throw ValidationError("cell size and time step must be positive");

    struct Kept {
        ObjectId object;
        std::int64_t instant;
        Cell cell;
        double distance;
        double timestamp;
    };
    std::vector<std::string> names;
    std::unordered_map<std::string, ObjectId> ids;
    std::vector<Kept> kept;
    std::size_t dropped = 0;
    std::int64_t last_instant = -1;
    for (const auto& p : pings) {
        const double rel = (p.timestamp - grid.t0) / grid.time_step;
        const double cx = std::floor((p.x - grid.origin_x) / grid.cell_size);
        const double cy = std::floor((p.y - grid.origin_y) / grid.cell_size);
        const double inst = std::round(rel);
        if (!std::isfinite(rel) || inst < 0 || inst >= std::numeric_limits<Instant>::max() || !(cx >= 0) ||
            !(cy >= 0) || cx >= grid.width || cy >= grid.height) {
            ++dropped;
            continue;
        }
        auto [it, fresh] = ids.try_emplace(p.object_id, static_cast<ObjectId>(names.size()));
        if (fresh) names.push_back(p.object_id);
        const auto instant = static_cast<std::int64_t>(inst);
        kept.push_back({it->second, instant, {static_cast<std::int32_t>(cx), static_cast<std::int32_t>(cy)},
                        std::abs(rel - inst), p.timestamp});
        last_instant = std::max(last_instant, instant);
    }

    RegularDataset ds(grid, static_cast<std::uint32_t>(last_instant + 1), std::move(names));
    // Keep the best ping per bucket; stable order resolves equal timestamps to input order.
    std::stable_sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
        if (a.object != b.object) return a.object < b.object;
        if (a.instant != b.instant) return a.instant < b.instant;
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.timestamp < b.timestamp;
    });
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0 && kept[i].object == kept[i - 1].object && kept[i].instant == kept[i - 1].instant) continue;
        ds.set(kept[i].object, static_cast<Instant>(kept[i].instant), kept[i].cell);
    }
    return {std::move(ds), dropped};
}

std::vector<RawPing> dataset_to_pings(const RegularDataset& ds) {
    const auto& g = ds.grid();
    std::vector<RawPing> out;
    for (ObjectId o = 0; o < ds.num_objects(); ++o) {
        for (Instant t = 0; t < ds.num_instants(); ++t) {
            if (auto c = ds.at(o, t))
                out.push_back({ds.names()[o], g.t0 + t * g.time_step, g.origin_x + (c->x + 0.5) * g.cell_size,
                               g.origin_y + (c->y + 0.5) * g.cell_size});
        }
    }
    return out;
}

namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

double parse_double(std::string_view s, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
        throw FormatError(std::string("invalid ") + what + " '" + std::string(s) + "'");
    return v;
}

unsigned digits(std::string_view s, std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) throw FormatError("invalid timestamp '" + std::string(s) + "'");
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') throw FormatError("invalid timestamp '" + std::string(s) + "'");
        v = v * 10 + static_cast<unsigned>(s[i] - '0');
    }
    return v;
}

} // namespace

double parse_timestamp(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.size() < 10 || s[4] != '-') return parse_double(s, "timestamp");

    // YYYY-MM-DD[(T| )hh:mm:ss[.fff]][Z|(+|-)hh:mm]
    const auto bad = [&] { return FormatError("invalid timestamp '" + std::string(s) + "'"); };
    const unsigned year = digits(s, 0, 4), month = digits(s, 5, 2), day = digits(s, 8, 2);
    if (s[7] != '-' || month < 1 || month > 12 || day < 1 || day > 31) throw bad();
    double secs = 0;
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        const unsigned hh = digits(s, pos + 1, 2), mm = digits(s, pos + 4, 2), ss = digits(s, pos + 7, 2);
        if (s[pos + 3] != ':' || s[pos + 6] != ':' || hh > 23 || mm > 59 || ss > 60) throw bad();
        secs = hh * 3600.0 + mm * 60.0 + ss;
        pos += 9;
        if (pos < s.size() && s[pos] == '.') {
            std::size_t end = pos + 1;
            while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
            if (end == pos + 1) throw bad();
            secs += parse_double(s.substr(pos, end - pos), "timestamp");
            pos = end;
        }
    }
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            ++pos;
        } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
            const double off = digits(s, pos + 1, 2) * 3600.0 + digits(s, pos + 4, 2) * 60.0;
            secs -= s[pos] == '+' ? off : -off;
            pos = s.size();
        } else {
            throw bad();
        }
    }
    return static_cast<double>(days_from_civil(year, month, day)) * 86400.0 + secs;
}

std::vector<RawPing> read_pings_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV input is empty");
    auto split = [](std::string_view l) {
        std::vector<std::string_view> f;
        std::size_t start = 0;
        for (;;) {
            const auto comma = l.find(',', start);
            f.push_back(trim(l.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return f;
    };
    const auto header = split(line);
    if (header.size() != 4 || header[0] != "objectId" || header[1] != "timestamp" || header[2] != "x" ||
        header[3] != "y")
        throw FormatError("CSV header must be objectId,timestamp,x,y");
    std::vector<RawPing> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(line);
        if (f.size() != 4) throw FormatError("line " + std::to_string(line_no) + ": expected 4 fields");
        try {
            out.push_back({std::string(f[0]), parse_timestamp(f[1]), parse_double(f[2], "x"), parse_double(f[3], "y")});
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (out.back().object_id.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty objectId");
    }
    return out;
}

void write_pings_csv(std::ostream& out, std::span<const RawPing> pings) {
    auto num = [](double v) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, p);
    };
    out << "objectId,timestamp,x,y\n";
    for (const auto& p : pings) out << p.object_id << ',' << num(p.timestamp) << ',' << num(p.x) << ',' << num(p.y) << '\n';
}

} // namespace gract
