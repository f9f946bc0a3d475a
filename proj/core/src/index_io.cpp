#include "gract/error.hpp"
#include "gract/trajectory_index.hpp"

#include <fstream>
#include <iterator>
#include <string>

namespace gract {

namespace {

constexpr std::uint8_t kMagic[4] = {'G', 'R', 'C', 'T'};
constexpr std::uint16_t kVersion = 1;

void expect_end(const ByteReader& in, const char* what) {
    if (!in.at_end()) throw FormatError(std::string("trailing bytes in ") + what + " section");
}

} // namespace

void TrajectoryIndex::write_header(ByteWriter& out) const {
    const auto& h = header_;
    out.u32(h.grid_width);
    out.u32(h.grid_height);
    out.u32(h.num_objects);
    out.u32(h.num_instants);
    out.u32(h.period);
    out.u32(h.v_max);
    out.u8(static_cast<std::uint8_t>(h.mode));
    out.u32(h.k);
    out.u32(h.scdc_s);
    out.u32(h.dac_span_bits);
    out.u32(h.dac_coord_bits);
    out.u32(h.inverse_sample);
    out.u64(h.present_records);
}

void TrajectoryIndex::write_dictionary(ByteWriter& out) const {
    out.u32(static_cast<std::uint32_t>(names_.size()));
    for (const auto& n : names_) out.str(n);
}

void TrajectoryIndex::write_snapshots(ByteWriter& out) const {
    out.u32(num_periods());
    for (const auto& s : snapshots_) s.save(out);
}

void TrajectoryIndex::write_logs(ByteWriter& out) const {
    offsets_.save(out);
    reappears_.save(out);
    if (header_.mode == CompressionMode::Scdc) {
        out.u64(scdc_bytes_.size());
        out.bytes(scdc_bytes_);
    } else {
        symbols_.save(out);
    }
}

std::vector<std::uint8_t> TrajectoryIndex::serialize() const {
    ByteWriter out;
    out.bytes(kMagic);
    out.u16(kVersion);
    ByteWriter sec;
    write_header(sec);
    out.section(sec);
    sec = {};
    write_dictionary(sec);
    out.section(sec);
    sec = {};
    write_snapshots(sec);
    out.section(sec);
    sec = {};
    write_logs(sec);
    out.section(sec);
    sec = {};
    if (header_.mode == CompressionMode::GraCT) grammar_.save(sec);
    out.section(sec);
    return out.take();
}

TrajectoryIndex TrajectoryIndex::load(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    auto magic = in.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw FormatError("not a trajectory index");
    if (auto v = in.u16(); v != kVersion) throw FormatError("unsupported index version " + std::to_string(v));

    TrajectoryIndex idx;
    auto& h = idx.header_;
    {
        ByteReader s = in.section();
        h.grid_width = s.u32();
        h.grid_height = s.u32();
        h.num_objects = s.u32();
        h.num_instants = s.u32();
        h.period = s.u32();
        h.v_max = s.u32();
        const auto mode = s.u8();
        if (mode > 1) throw FormatError("unknown compression mode");
        h.mode = static_cast<CompressionMode>(mode);
        h.k = s.u32();
        h.scdc_s = s.u32();
        h.dac_span_bits = s.u32();
        h.dac_coord_bits = s.u32();
        h.inverse_sample = s.u32();
        h.present_records = s.u64();
        expect_end(s, "header");
        if (h.period < 2 || h.num_instants == 0 || h.grid_width == 0 || h.grid_height == 0)
            throw CorruptionError("inconsistent index header");
        if (h.mode == CompressionMode::Scdc && (h.scdc_s < 1 || h.scdc_s > 255))
            throw CorruptionError("invalid SCDC parameter");
    }
    const std::uint32_t P = (h.num_instants - 1) / h.period + 1;
    const std::size_t slots = std::size_t{P} * h.num_objects;
    {
        ByteReader s = in.section();
        if (s.u32() != h.num_objects) throw CorruptionError("dictionary size disagrees with header");
        idx.names_.reserve(h.num_objects);
        for (std::uint32_t o = 0; o < h.num_objects; ++o) idx.names_.push_back(s.str());
        expect_end(s, "dictionary");
        idx.rebuild_name_map();
        if (idx.name_to_id_.size() != h.num_objects) throw CorruptionError("duplicate object names");
    }
    {
        ByteReader s = in.section();
        if (s.u32() != P) throw CorruptionError("snapshot count disagrees with header");
        for (std::uint32_t i = 0; i < P; ++i) {
            Snapshot snap = Snapshot::load(s);
            if (snap.instant() != i * h.period || snap.num_objects() != h.num_objects ||
                snap.tree().width() != h.grid_width || snap.tree().height() != h.grid_height)
                throw CorruptionError("snapshot " + std::to_string(i) + " disagrees with header");
            idx.snapshots_.push_back(std::move(snap));
        }
        expect_end(s, "snapshot");
    }
    std::size_t log_size = 0;
    {
        ByteReader s = in.section();
        idx.offsets_ = IntVector::load(s);
        idx.reappears_ = BitVector::load(s);
        if (h.mode == CompressionMode::Scdc) {
            const auto n = s.u64();
            if (n > s.remaining()) throw FormatError("truncated log bytes");
            auto b = s.bytes(static_cast<std::size_t>(n));
            idx.scdc_bytes_.assign(b.begin(), b.end());
            log_size = idx.scdc_bytes_.size();
        } else {
            idx.symbols_ = IntVector::load(s);
            log_size = idx.symbols_.size();
        }
        expect_end(s, "log");
        if (idx.offsets_.size() != slots + 1 || idx.reappears_.size() != slots)
            throw CorruptionError("log directory disagrees with header");
        if (idx.offsets_[0] != 0 || idx.offsets_[slots] != log_size)
            throw CorruptionError("log offsets do not cover the log data");
        for (std::size_t j = 0; j < slots; ++j)
            if (idx.offsets_[j] > idx.offsets_[j + 1]) throw CorruptionError("log offsets are not monotone");
    }
    {
        ByteReader s = in.section();
        if (h.mode == CompressionMode::GraCT) {
            idx.grammar_ = Grammar::load(s);
            for (std::size_t j = 0; j < idx.symbols_.size(); ++j)
                if (!idx.grammar_.is_valid(idx.symbols_[j])) throw CorruptionError("log symbol outside the grammar");
        }
        expect_end(s, "grammar");
    }
    if (!in.at_end()) throw FormatError("trailing bytes after index");
    return idx;
}

SizeReport TrajectoryIndex::stats() const {
    SizeReport r;
    ByteWriter w;
    write_header(w);
    r.header_bytes = w.size() + 6;
    w = {};
    write_dictionary(w);
    r.dictionary_bytes = w.size();
    w = {};
    write_snapshots(w);
    r.snapshot_bytes = w.size();
    w = {};
    write_logs(w);
    r.log_bytes = w.size();
    if (header_.mode == CompressionMode::GraCT) r.grammar_bytes = grammar_.serialized_bytes();
    // Five u64 section lengths.
    r.total_bytes = r.header_bytes + r.dictionary_bytes + r.snapshot_bytes + r.log_bytes + r.grammar_bytes + 5 * 8;
    r.plain_bytes = header_.present_records * 8;
    r.ratio = r.plain_bytes ? static_cast<double>(r.total_bytes) / static_cast<double>(r.plain_bytes) : 0.0;
    return r;
}

void TrajectoryIndex::save_file(const std::string& path) const {
    const auto bytes = serialize();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw FormatError("failed writing '" + path + "'");
}

TrajectoryIndex TrajectoryIndex::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return load(bytes);
}

} // namespace gract
