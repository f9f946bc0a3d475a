#include "gract/dataset.hpp"
#include "gract/error.hpp"
#include "gract/oracle.hpp"
#include "gract/trajectory_index.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace gract;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kQueryError = 1, kUsageError = 2, kFormatError = 3 };

// ---------------------------------------------------------------- options

struct GridOptions {
    double cell_size = 50.0;
    double time_step = 60.0;
    std::vector<double> origin;   // empty: fitted to the data
};

struct BuildOptions {
    std::string input;
    std::string out;
    std::uint32_t period = 120;
    std::string mode = "gract";
    std::uint32_t k = 2;
    unsigned scdc_s = 0;
    GridOptions grid;
};

struct QueryArgs {
    std::string index;
    std::string object;
    Instant t = 0;
    Instant from = 0;
    Instant to = 0;
    std::vector<std::int64_t> rect;
    bool forward = false;
    bool no_pruning = false;
    bool show_stats = false;
};

struct GenOptions {
    std::uint32_t objects = 100;
    std::uint32_t instants = 1000;
    std::uint64_t seed = 1;
    std::string out;
    std::uint32_t width = 1024;
    std::uint32_t height = 1024;
    double cell_size = 50.0;
    double time_step = 60.0;
    BehaviorMix mix;
};

struct VerifyOptions {
    std::string input;
    std::uint32_t period = 120;
    std::size_t queries = 200;
    std::uint64_t seed = 1;
    std::string mode = "both";
    std::uint32_t k = 2;
    GridOptions grid;
};

struct BenchOptions {
    std::string index;
    std::size_t workload = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--cell-size", g.cell_size, "Cell side in input coordinate units")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--time-step", g.time_step, "Seconds per instant")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--origin", g.origin, "Grid origin X,Y (default: minimum coordinates)")
        ->delimiter(',')
        ->expected(2);
}

// ---------------------------------------------------------------- helpers

RegularDataset load_dataset(const std::string& path, const GridOptions& opts) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    const auto pings = read_pings_csv(in);
    if (pings.empty()) throw FormatError("'" + path + "' has no pings");
    spdlog::info("read {} pings from {}", pings.size(), path);

    GridConfig grid = fit_grid(pings, opts.cell_size, opts.time_step);
    if (!opts.origin.empty()) {
        grid.origin_x = opts.origin[0];
        grid.origin_y = opts.origin[1];
        double max_x = grid.origin_x, max_y = grid.origin_y;
        for (const auto& p : pings) {
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
        grid.width = static_cast<std::uint32_t>(std::floor((max_x - grid.origin_x) / grid.cell_size)) + 1;
        grid.height = static_cast<std::uint32_t>(std::floor((max_y - grid.origin_y) / grid.cell_size)) + 1;
    }
    auto result = regularize(pings, grid);
    if (result.dropped > 0) spdlog::warn("dropped {} pings outside the grid", result.dropped);
    const auto& ds = result.dataset;
    spdlog::info("grid {}x{} cells, {} objects, {} instants, {} records", ds.width(), ds.height(),
                 ds.num_objects(), ds.num_instants(), ds.present_records());
    return std::move(result.dataset);
}

CompressionMode parse_mode(const std::string& m) {
    return m == "scdc" ? CompressionMode::Scdc : CompressionMode::GraCT;
}

TrajectoryIndex timed_build(const RegularDataset& ds, const BuildConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    auto idx = TrajectoryIndex::build(ds, cfg);
    const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
    spdlog::info("built {} index in {:.2f} s", to_string(cfg.mode), secs.count());
    return idx;
}

Rect to_rect(const std::vector<std::int64_t>& v) { return {v[0], v[1], v[2], v[3]}; }

QueryOptions query_options(const QueryArgs& a) {
    QueryOptions o;
    o.traversal = a.forward ? Traversal::Forward : Traversal::Nearest;
    o.mbr_pruning = o.reach_pruning = !a.no_pruning;
    return o;
}

// Random queries over an index. Half of the rectangles are centered on an
// object present at the query instant so answers are rarely empty.
struct Query {
    ObjectId object = 0;
    Instant t = 0, ts = 0, te = 0;
    Rect rect;
};

std::vector<Query> make_workload(const TrajectoryIndex& idx, std::size_t count, std::uint64_t seed) {
    const auto& h = idx.header();
    std::mt19937_64 rng(seed);
    auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    const std::int64_t T = h.num_instants, W = h.grid_width, H = h.grid_height;
    const std::int64_t max_interval = std::max<std::int64_t>(1, 2 * h.period);
    std::vector<Query> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Query q;
        q.object = static_cast<ObjectId>(uni(0, h.num_objects - 1));
        q.t = static_cast<Instant>(uni(0, T - 1));
        q.ts = static_cast<Instant>(uni(0, T - 1));
        q.te = static_cast<Instant>(std::min<std::int64_t>(T - 1, q.ts + uni(0, max_interval)));
        const std::int64_t hw = uni(0, std::max<std::int64_t>(1, W / 16));
        const std::int64_t hh = uni(0, std::max<std::int64_t>(1, H / 16));
        std::int64_t cx = uni(0, W - 1), cy = uni(0, H - 1);
        for (int tries = 0; i % 2 == 0 && tries < 20; ++tries) {
            if (auto c = idx.position(static_cast<ObjectId>(uni(0, h.num_objects - 1)), q.t)) {
                cx = c->x;
                cy = c->y;
                break;
            }
        }
        q.rect = Rect{cx - hw, cy - hh, cx + hw, cy + hh}.clipped(W, H);
        out.push_back(q);
    }
    return out;
}

// ---------------------------------------------------------------- subcommands

int cmd_build(const BuildOptions& o) {
    const auto ds = load_dataset(o.input, o.grid);
    BuildConfig cfg;
    cfg.period = o.period;
    cfg.mode = parse_mode(o.mode);
    cfg.k = o.k;
    cfg.scdc_s = o.scdc_s;
    const auto idx = timed_build(ds, cfg);
    idx.save_file(o.out);
    const auto s = idx.stats();
    std::cout << "wrote " << o.out << " (" << s.total_bytes << " bytes, ratio " << s.ratio << ")\n";
    return kOk;
}

int cmd_query(const std::string& type, const QueryArgs& a, bool as_json) {
    const auto idx = TrajectoryIndex::load_file(a.index);
    const auto opts = query_options(a);
    QueryStats qs;
    auto print_cell = [&](json row, const std::optional<Cell>& c, const std::string& prefix) {
        if (as_json) {
            row["present"] = c.has_value();
            if (c) {
                row["x"] = c->x;
                row["y"] = c->y;
            }
            std::cout << row.dump() << "\n";
        } else if (c) {
            std::cout << prefix << c->x << " " << c->y << "\n";
        } else {
            std::cout << prefix << "-\n";
        }
    };

    if (type == "position") {
        const ObjectId o = idx.object_id(a.object);
        const auto c = idx.position(o, a.t, &qs, opts);
        print_cell({{"object", a.object}, {"t", a.t}}, c, "");
    } else if (type == "trajectory") {
        const ObjectId o = idx.object_id(a.object);
        for (const auto& p : idx.trajectory(o, a.from, a.to, &qs))
            print_cell({{"t", p.instant}}, p.cell, std::to_string(p.instant) + " ");
    } else if (type == "slice") {
        for (const auto& r : idx.time_slice(to_rect(a.rect), a.t, &qs, opts)) {
            const auto& name = idx.object_name(r.object);
            if (as_json)
                std::cout << json{{"object", name}, {"x", r.cell.x}, {"y", r.cell.y}}.dump() << "\n";
            else
                std::cout << name << " " << r.cell.x << " " << r.cell.y << "\n";
        }
    } else {
        for (ObjectId o : idx.time_interval(to_rect(a.rect), a.from, a.to, &qs, opts)) {
            if (as_json)
                std::cout << json{{"object", idx.object_name(o)}}.dump() << "\n";
            else
                std::cout << idx.object_name(o) << "\n";
        }
    }
    if (a.show_stats)
        std::cerr << "symbols_processed " << qs.symbols_processed << "\nrules_expanded " << qs.rules_expanded << "\n";
    return kOk;
}

int cmd_stats(const std::string& path, bool as_json) {
    const auto idx = TrajectoryIndex::load_file(path);
    const auto& h = idx.header();
    const auto s = idx.stats();
    const json j = {
        {"mode", std::string(to_string(h.mode))},
        {"grid_width", h.grid_width},
        {"grid_height", h.grid_height},
        {"objects", h.num_objects},
        {"instants", h.num_instants},
        {"period", h.period},
        {"snapshots", idx.num_periods()},
        {"k", h.k},
        {"v_max", h.v_max},
        {"scdc_s", h.scdc_s},
        {"rules", idx.grammar().num_rules()},
        {"present_records", h.present_records},
        {"header_bytes", s.header_bytes},
        {"dictionary_bytes", s.dictionary_bytes},
        {"snapshot_bytes", s.snapshot_bytes},
        {"log_bytes", s.log_bytes},
        {"grammar_bytes", s.grammar_bytes},
        {"total_bytes", s.total_bytes},
        {"plain_bytes", s.plain_bytes},
        {"ratio", s.ratio},
    };
    if (as_json) {
        std::cout << j.dump() << "\n";
        return kOk;
    }
    // json objects iterate in key order; keep the declaration order instead.
    for (const char* key : {"mode", "grid_width", "grid_height", "objects", "instants", "period", "snapshots", "k",
                            "v_max", "scdc_s", "rules", "present_records", "header_bytes", "dictionary_bytes",
                            "snapshot_bytes", "log_bytes", "grammar_bytes", "total_bytes", "plain_bytes", "ratio"}) {
        const auto& v = j.at(key);
        std::cout << key << " " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
    return kOk;
}

int cmd_gen(const GenOptions& o) {
    const auto ds = gen_synthetic(o.objects, o.instants, o.width, o.height, o.mix, o.seed);
    GridConfig g = ds.grid();
    g.cell_size = o.cell_size;
    g.time_step = o.time_step;
    RegularDataset scaled(g, ds.num_instants(), ds.names());
    for (ObjectId obj = 0; obj < ds.num_objects(); ++obj)
        for (Instant t = 0; t < ds.num_instants(); ++t)
            if (auto c = ds.at(obj, t)) scaled.set(obj, t, *c);

    std::ofstream out(o.out);
    if (!out) throw FormatError("cannot open '" + o.out + "' for writing");
    const auto pings = dataset_to_pings(scaled);
    write_pings_csv(out, pings);
    if (!out) throw FormatError("failed writing '" + o.out + "'");
    std::cout << "wrote " << o.out << " (" << pings.size() << " pings)\n";
    return kOk;
}

int cmd_verify(const VerifyOptions& o, bool as_json) {
    const auto ds = load_dataset(o.input, o.grid);
    const Oracle oracle(ds);
    std::vector<CompressionMode> modes;
    if (o.mode != "scdc") modes.push_back(CompressionMode::GraCT);
    if (o.mode != "gract") modes.push_back(CompressionMode::Scdc);

    bool all = true;
    for (auto mode : modes) {
        BuildConfig cfg;
        cfg.period = o.period;
        cfg.mode = mode;
        cfg.k = o.k;
        const auto idx = timed_build(ds, cfg);
        const auto qs = make_workload(idx, o.queries, o.seed);
        std::size_t ok[4] = {};
        for (const auto& q : qs) {
            ok[0] += idx.position(q.object, q.t) == oracle.position(q.object, q.t);
            ok[1] += idx.trajectory(q.object, q.ts, q.te) == oracle.trajectory(q.object, q.ts, q.te);
            ok[2] += idx.time_slice(q.rect, q.t) == oracle.time_slice(q.rect, q.t);
            ok[3] += idx.time_interval(q.rect, q.ts, q.te) == oracle.time_interval(q.rect, q.ts, q.te);
        }
        const char* names[] = {"position", "trajectory", "slice", "interval"};
        for (int i = 0; i < 4; ++i) {
            all = all && ok[i] == qs.size();
            if (as_json)
                std::cout << json{{"mode", std::string(to_string(mode))}, {"query", names[i]}, {"matched", ok[i]},
                                  {"total", qs.size()}}
                                 .dump()
                          << "\n";
            else
                std::cout << to_string(mode) << " " << names[i] << ": " << ok[i] << "/" << qs.size() << " match\n";
        }
    }
    return all ? kOk : kQueryError;
}

int cmd_bench(const BenchOptions& o, bool as_json) {
    const auto idx = TrajectoryIndex::load_file(o.index);
    const auto qs = make_workload(idx, o.workload, o.seed);
    const char* names[] = {"position", "trajectory", "slice", "interval"};

    for (int type = 0; type < 4; ++type) {
        std::atomic<std::size_t> next{0};
        std::vector<QueryStats> stats(o.threads);
        std::vector<double> nanos(o.threads, 0.0);
        auto worker = [&](unsigned w) {
            for (std::size_t i; (i = next.fetch_add(1)) < qs.size();) {
                const auto& q = qs[i];
                const auto start = std::chrono::steady_clock::now();
                switch (type) {
                case 0: (void)idx.position(q.object, q.t, &stats[w]); break;
                case 1: (void)idx.trajectory(q.object, q.ts, q.te, &stats[w]); break;
                case 2: (void)idx.time_slice(q.rect, q.t, &stats[w]); break;
                default: (void)idx.time_interval(q.rect, q.ts, q.te, &stats[w]); break;
                }
                nanos[w] += std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < o.threads; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& t : pool) t.join();

        QueryStats total;
        double ns = 0;
        for (unsigned w = 0; w < o.threads; ++w) {
            total += stats[w];
            ns += nanos[w];
        }
        const double n = static_cast<double>(std::max<std::size_t>(1, qs.size()));
        const double mean_us = ns / n / 1000.0;
        const double sym = static_cast<double>(total.symbols_processed) / n;
        const double rules = static_cast<double>(total.rules_expanded) / n;
        if (as_json)
            std::cout << json{{"query", names[type]}, {"queries", qs.size()}, {"threads", o.threads},
                              {"mean_us", mean_us}, {"mean_symbols_processed", sym}, {"mean_rules_expanded", rules}}
                             .dump()
                      << "\n";
        else
            std::cout << names[type] << " queries=" << qs.size() << " mean_us=" << mean_us
                      << " symbols_processed=" << sym << " rules_expanded=" << rules << "\n";
    }
    return kOk;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_st("gract");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("GRACT_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Compressed trajectory index: build, query, inspect, benchmark and verify."};
    app.name("gract");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    bool as_json = false;
    app.add_flag("--json", as_json, "One JSON object per output line");

    BuildOptions build;
    auto* b = app.add_subcommand("build", "Build an index from a ping CSV (objectId,timestamp,x,y)");
    b->add_option("--input", build.input, "Input CSV")->required();
    b->add_option("--out", build.out, "Output index file")->required();
    b->add_option("--period", build.period, "Instants between snapshots")
        ->check(CLI::Range(2u, 1u << 30))
        ->capture_default_str();
    b->add_option("--mode", build.mode, "Log compression")
        ->check(CLI::IsMember({"gract", "scdc"}))
        ->capture_default_str();
    b->add_option("--k", build.k, "k^2-tree arity")->check(CLI::Range(2u, 16u))->capture_default_str();
    b->add_option("--scdc-s", build.scdc_s, "SCDC stopper count (0: size-optimal)")->check(CLI::Range(0u, 255u));
    add_grid_options(b, build.grid);

    QueryArgs qa;
    auto* q = app.add_subcommand("query", "Run one query against an index");
    q->require_subcommand(1);
    auto add_common = [&](CLI::App* c) {
        c->add_option("--index", qa.index, "Index file")->required();
        c->add_flag("--forward", qa.forward, "Always start from the preceding snapshot");
        c->add_flag("--no-pruning", qa.no_pruning, "Disable MBR and reachability pruning");
        c->add_flag("--stats", qa.show_stats, "Print work counters to stderr");
        c->add_flag("--json", as_json, "One JSON object per output line");
    };
    auto* qp = q->add_subcommand("position", "Cell of an object at an instant");
    add_common(qp);
    qp->add_option("--object", qa.object, "Object id")->required();
    qp->add_option("--t", qa.t, "Instant")->required();
    auto* qt = q->add_subcommand("trajectory", "Cells of an object over [from, to]");
    add_common(qt);
    qt->add_option("--object", qa.object, "Object id")->required();
    qt->add_option("--from", qa.from, "First instant")->required();
    qt->add_option("--to", qa.to, "Last instant")->required();
    auto* qs = q->add_subcommand("slice", "Objects inside a rectangle at an instant");
    add_common(qs);
    qs->add_option("--rect", qa.rect, "Closed cell rectangle X1,Y1,X2,Y2")->required()->delimiter(',')->expected(4);
    qs->add_option("--t", qa.t, "Instant")->required();
    auto* qi = q->add_subcommand("interval", "Objects inside a rectangle at some instant of [from, to]");
    add_common(qi);
    qi->add_option("--rect", qa.rect, "Closed cell rectangle X1,Y1,X2,Y2")->required()->delimiter(',')->expected(4);
    qi->add_option("--from", qa.from, "First instant")->required();
    qi->add_option("--to", qa.to, "Last instant")->required();

    std::string stats_index;
    auto* s = app.add_subcommand("stats", "Print the size report of an index");
    s->add_option("--index", stats_index, "Index file")->required();
    s->add_flag("--json", as_json, "One JSON object per output line");

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "Write a synthetic ping CSV");
    g->add_option("--objects", gen.objects, "Number of objects")->required()->check(CLI::Range(1u, 1u << 24));
    g->add_option("--instants", gen.instants, "Number of instants")->required()->check(CLI::Range(1u, 1u << 24));
    g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output CSV")->required();
    g->add_option("--width", gen.width, "Grid width in cells")->check(CLI::Range(1u, 1u << 30))->capture_default_str();
    g->add_option("--height", gen.height, "Grid height in cells")->check(CLI::Range(1u, 1u << 30))->capture_default_str();
    g->add_option("--cell-size", gen.cell_size, "Cell side in output units")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--time-step", gen.time_step, "Seconds per instant")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--stationary", gen.mix.stationary, "Weight of stationary objects")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--straight", gen.mix.straight, "Weight of straight movers")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--random-walk", gen.mix.random_walk, "Weight of random walkers")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--gap-fraction", gen.mix.gap_fraction, "Share of objects with signal gaps")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    g->add_option("--turn-probability", gen.mix.turn_probability, "Per-instant turn chance of straight movers")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    g->add_option("--max-speed", gen.mix.max_speed, "Cells per instant along each axis")->check(CLI::Range(1, 1 << 20))->capture_default_str();

    VerifyOptions ver;
    auto* v = app.add_subcommand("verify", "Check index answers against a scan oracle on random queries");
    v->add_option("--input", ver.input, "Input CSV")->required();
    v->add_option("--period", ver.period, "Instants between snapshots")->check(CLI::Range(2u, 1u << 30))->capture_default_str();
    v->add_option("--queries", ver.queries, "Queries per type")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24))->capture_default_str();
    v->add_option("--seed", ver.seed, "Workload seed")->capture_default_str();
    v->add_option("--mode", ver.mode, "Modes to verify")->check(CLI::IsMember({"gract", "scdc", "both"}))->capture_default_str();
    v->add_option("--k", ver.k, "k^2-tree arity")->check(CLI::Range(2u, 16u))->capture_default_str();
    add_grid_options(v, ver.grid);
    v->add_flag("--json", as_json, "One JSON object per output line");

    BenchOptions bench;
    auto* bn = app.add_subcommand("bench", "Time random queries of each type");
    bn->add_option("--index", bench.index, "Index file")->required();
    bn->add_option("--workload", bench.workload, "Queries per type")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24))->capture_default_str();
    bn->add_option("--seed", bench.seed, "Workload seed")->capture_default_str();
    bn->add_option("--threads", bench.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    bn->add_flag("--json", as_json, "One JSON object per output line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (*b) return cmd_build(build);
        if (*q) {
            for (auto* sub : {qp, qt, qs, qi})
                if (*sub) return cmd_query(sub->get_name(), qa, as_json);
        }
        if (*s) return cmd_stats(stats_index, as_json);
        if (*g) return cmd_gen(gen);
        if (*v) return cmd_verify(ver, as_json);
        if (*bn) return cmd_bench(bench, as_json);
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kQueryError;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kQueryError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        // FormatError, CorruptionError and stream failures.
        std::cerr << "error: " << e.what() << "\n";
        return kFormatError;
    }
    return kUsageError;
}
