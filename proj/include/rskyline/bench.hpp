#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rskyline/brs.hpp"
#include "rskyline/datagen.hpp"
#include "rskyline/kmac.hpp"
#include "rskyline/oracle.hpp"
#include "rskyline/rsl.hpp"

// Workload construction, engine dispatch and CSV reporting behind the
// command-line tool.  Reports carry a version header line and are written
// atomically; wall-clock columns are informational only, every other column
// is deterministic for a fixed config.

namespace rskyline {

inline constexpr const char* kReportHeader = "# rskyline-kit v1";

enum class BenchEngine { brs, rsl, basic_brs, basic_rsl, batch, bb };

inline const char* engine_name(BenchEngine e) {
    switch (e) {
        case BenchEngine::brs: return "brs";
        case BenchEngine::rsl: return "rsl";
        case BenchEngine::basic_brs: return "basic-brs";
        case BenchEngine::basic_rsl: return "basic-rsl";
        case BenchEngine::batch: return "batch";
        case BenchEngine::bb: return "bb";
    }
    return "?";
}

inline BenchEngine parse_engine(const std::string& s) {
    if (s == "brs") return BenchEngine::brs;
    if (s == "rsl") return BenchEngine::rsl;
    if (s == "basic-brs") return BenchEngine::basic_brs;
    if (s == "basic-rsl") return BenchEngine::basic_rsl;
    if (s == "batch") return BenchEngine::batch;
    if (s == "bb") return BenchEngine::bb;
    throw std::invalid_argument("unknown engine: " + s);
}

inline Distribution parse_dist(const std::string& s) {
    if (s == "un") return Distribution::uniform;
    if (s == "ac") return Distribution::anticorrelated;
    if (s == "co") return Distribution::correlated;
    throw std::invalid_argument("unknown distribution: " + s);
}

struct RunConfig {
    std::string products = "100000";   // path, "<dist>:<n>", or "<n>"
    std::string customers = "100000";
    std::string candidates = "1000";
    int d = 3;
    Distribution dist = Distribution::uniform;
    BenchEngine engine = BenchEngine::rsl;
    int k = 1;
    int batch_size = 10;
    int fanout = 0;  // 0 derives from page_bytes
    int page_bytes = 4096;
    std::uint64_t seed = 42;
    bool verify = false;
    bool id_column = false;
    bool normalize = true;
    std::string out = "report.csv";
};

namespace detail {

inline bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// A data source is a CSV path, an inline "<dist>:<n>" spec, or a bare count
// using the config's distribution.  Generated sources are seeded from the
// config seed plus a per-role offset.
inline std::vector<Point> resolve_source(const std::string& src, const RunConfig& cfg, std::uint64_t role_offset) {
    const auto colon = src.find(':');
    if (colon != std::string::npos && colon <= 2) {
        GenSpec spec;
        spec.dist = parse_dist(src.substr(0, colon));
        const std::string count = src.substr(colon + 1);
        if (!detail::looks_numeric(count)) throw std::invalid_argument("bad gen spec: " + src);
        spec.n = std::stoull(count);
        spec.dim = cfg.d;
        spec.seed = cfg.seed + role_offset;
        return spec.n == 0 ? std::vector<Point>{} : generate(spec);
    }
    if (detail::looks_numeric(src)) {
        GenSpec spec;
        spec.dist = cfg.dist;
        spec.n = std::stoull(src);
        spec.dim = cfg.d;
        spec.seed = cfg.seed + role_offset;
        return spec.n == 0 ? std::vector<Point>{} : generate(spec);
    }
    return ingest_csv(src, cfg.normalize, cfg.id_column);
}

inline std::vector<Point> load_products(const RunConfig& cfg) { return resolve_source(cfg.products, cfg, 1); }
inline std::vector<Point> load_customers(const RunConfig& cfg) { return resolve_source(cfg.customers, cfg, 2); }
inline std::vector<Point> load_candidates(const RunConfig& cfg) { return resolve_source(cfg.candidates, cfg, 3); }

// Dimensionality comes from the data (ingested files may disagree with the
// --d default); all three sources must match.
inline int workload_dim(const std::vector<Point>& products, const std::vector<Point>& customers,
                        const std::vector<Point>& candidates) {
    const int d = products.front().dim();
    if (customers.front().dim() != d || (!candidates.empty() && candidates.front().dim() != d))
        throw std::invalid_argument("products, customers and candidates must share one dimensionality");
    return d;
}

struct ReportRow {
    std::string kind;      // candidate | aggregate | selection
    std::string engine;
    std::string candidate; // id, or empty
    std::uint64_t reads_product = 0;
    std::uint64_t reads_customer = 0;
    std::uint64_t dominance_checks = 0;
    double wall_ms = 0;
    std::uint64_t score = 0;
    std::string extra;     // verify flag or chosen ids
};

struct RunReport {
    std::vector<ReportRow> rows;
    // (candidate id, total_io, results_emitted) samples for single-query engines
    std::vector<std::tuple<PointId, std::uint64_t, std::uint64_t>> progress;
};

inline void write_report_csv(const std::string& path, const RunReport& report) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << kReportHeader << "\n";
        out << "kind,engine,candidate,reads_product,reads_customer,dominance_checks,wall_ms,score,extra\n";
        out.setf(std::ios::fixed);
        out.precision(3);
        for (const ReportRow& r : report.rows) {
            out << r.kind << ',' << r.engine << ',' << r.candidate << ',' << r.reads_product << ','
                << r.reads_customer << ',' << r.dominance_checks << ',' << r.wall_ms << ',' << r.score << ','
                << r.extra << "\n";
        }
    }
    std::filesystem::rename(tmp, path);
}

inline void write_progress_csv(const std::string& path, const RunReport& report) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << kReportHeader << "\n";
        out << "candidate,total_io,results_emitted\n";
        for (const auto& [cand, io, emitted] : report.progress) {
            out << cand << ',' << io << ',' << emitted << "\n";
        }
    }
    std::filesystem::rename(tmp, path);
}

inline std::string progress_path(const std::string& report_path) {
    return report_path + ".progress.csv";
}

// gen subcommand: write one synthetic dataset.
inline void cmd_gen(const GenSpec& spec, const std::string& out_path) {
    write_csv(out_path, generate(spec));
}

// Single-query workload: one brs/rsl run per candidate.
inline RunReport cmd_query(const RunConfig& cfg) {
    if (cfg.engine != BenchEngine::brs && cfg.engine != BenchEngine::rsl)
        throw std::invalid_argument("query supports engines brs and rsl");
    const auto products = load_products(cfg);
    const auto customers = load_customers(cfg);
    const auto candidates = load_candidates(cfg);

    RunReport report;
    if (candidates.empty()) return report;

    if (cfg.verify && (products.size() > 2000 || customers.size() > 2000))
        throw std::invalid_argument("--verify is limited to at most 2000 products and customers");

    const int d = workload_dim(products, customers, candidates);
    const int fanout = cfg.fanout > 0 ? cfg.fanout : default_fanout(d, cfg.page_bytes);
    const RTree tp(products, fanout, TreeRole::product);
    const RTree tc(customers, fanout, TreeRole::customer);

    QueryStats agg;
    double wall_total = 0;
    for (const Point& q : candidates) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [set, stats] =
            cfg.engine == BenchEngine::rsl ? rsl(q, tp, tc) : brs(q, tp, tc);
        const double wall = detail::ms_since(t0);
        wall_total += wall;

        ReportRow row;
        row.kind = "candidate";
        row.engine = engine_name(cfg.engine);
        row.candidate = std::to_string(q.id);
        row.reads_product = stats.io.reads_product;
        row.reads_customer = stats.io.reads_customer;
        row.dominance_checks = stats.dominance_checks;
        row.wall_ms = wall;
        row.score = set.size();
        if (cfg.verify) {
            const InfluenceSet expect = oracle_reverse_skyline(q, products, customers);
            row.extra = set == expect ? "ok" : "MISMATCH";
        }
        report.rows.push_back(row);
        for (const auto& [io, emitted] : stats.progress) report.progress.emplace_back(q.id, io, emitted);
        agg.add(stats);
    }
    ReportRow total;
    total.kind = "aggregate";
    total.engine = engine_name(cfg.engine);
    total.reads_product = agg.io.reads_product;
    total.reads_customer = agg.io.reads_customer;
    total.dominance_checks = agg.dominance_checks;
    total.wall_ms = wall_total;
    total.score = agg.emitted;
    report.rows.push_back(total);
    return report;
}

// k-MAC workload: evaluator plus greedy selection.
inline RunReport cmd_kmac(const RunConfig& cfg) {
    if (cfg.engine == BenchEngine::brs || cfg.engine == BenchEngine::rsl)
        throw std::invalid_argument("kmac needs one of basic-brs, basic-rsl, batch, bb");
    const auto products = load_products(cfg);
    const auto customers = load_customers(cfg);
    const auto candidates = load_candidates(cfg);
    if (candidates.empty()) return {};
    if (cfg.k < 1 || static_cast<std::size_t>(cfg.k) > candidates.size())
        throw std::invalid_argument("k must be between 1 and the number of candidates");
    if (cfg.batch_size < 1 || cfg.batch_size > 1000)
        throw std::invalid_argument("batch size must be in [1, 1000]");

    const int d = workload_dim(products, customers, candidates);
    const int fanout = cfg.fanout > 0 ? cfg.fanout : default_fanout(d, cfg.page_bytes);
    const auto t0 = std::chrono::steady_clock::now();

    KmacResult res;
    double engine_ms = 0;
    if (cfg.engine == BenchEngine::bb) {
        const RTree tp(products, fanout, TreeRole::product);
        const ARTree tc(customers, fanout, TreeRole::customer);
        res = bb_kmac(candidates, tp, tc, cfg.k);
        engine_ms = detail::ms_since(t0);
    } else {
        const RTree tp(products, fanout, TreeRole::product);
        const RTree tc(customers, fanout, TreeRole::customer);
        if (cfg.engine == BenchEngine::batch) res = batch_kmac(candidates, tp, tc, cfg.k, cfg.batch_size);
        else
            res = basic_kmac(candidates, tp, tc, cfg.k,
                             cfg.engine == BenchEngine::basic_rsl ? SingleEngine::rsl : SingleEngine::brs);
        engine_ms = detail::ms_since(t0);
    }

    // selection timing reported on its own row
    const auto t1 = std::chrono::steady_clock::now();
    const Selection sel = kgcs(res.profiles, cfg.k);
    const double kgcs_ms = detail::ms_since(t1);

    RunReport report;
    for (std::size_t i = 0; i < res.profiles.size(); ++i) {
        ReportRow row;
        row.kind = "candidate";
        row.engine = engine_name(cfg.engine);
        row.candidate = std::to_string(res.profiles[i].id);
        row.reads_product = res.per_candidate[i].io.reads_product;
        row.reads_customer = res.per_candidate[i].io.reads_customer;
        row.dominance_checks = res.per_candidate[i].dominance_checks;
        row.score = res.profiles[i].influence.size();
        report.rows.push_back(row);
    }
    ReportRow agg;
    agg.kind = "aggregate";
    agg.engine = engine_name(cfg.engine);
    agg.reads_product = res.physical_io.reads_product;
    agg.reads_customer = res.physical_io.reads_customer;
    agg.dominance_checks = res.dominance_checks;
    agg.wall_ms = engine_ms;
    report.rows.push_back(agg);

    ReportRow selrow;
    selrow.kind = "selection";
    selrow.engine = engine_name(cfg.engine);
    selrow.wall_ms = kgcs_ms;
    selrow.score = sel.joint_score;
    std::string chosen;
    for (PointId id : sel.chosen) {
        if (!chosen.empty()) chosen += ';';
        chosen += std::to_string(id);
    }
    selrow.extra = chosen;
    if (!res.discarded.empty()) {
        std::string d = "discarded=";
        for (std::size_t i = 0; i < res.discarded.size(); ++i) {
            if (i) d += ';';
            d += std::to_string(res.discarded[i]);
        }
        selrow.extra += "|" + d;
    }
    report.rows.push_back(selrow);
    return report;
}

// Repeats cmd_kmac while one parameter runs over `values`; one selection row
// per (value, engine).
inline RunReport cmd_sweep(const std::string& axis, const std::vector<std::string>& values,
                           const RunConfig& base, const std::vector<BenchEngine>& engines) {
    RunReport out;
    for (const std::string& v : values) {
        RunConfig cfg = base;
        if (axis == "P") cfg.products = v;
        else if (axis == "C") cfg.customers = v;
        else if (axis == "Q") cfg.candidates = v;
        else if (axis == "D") cfg.d = std::stoi(v);
        else if (axis == "B") cfg.batch_size = std::stoi(v);
        else throw std::invalid_argument("unknown sweep axis: " + axis);
        for (BenchEngine e : engines) {
            cfg.engine = e;
            const RunReport r = cmd_kmac(cfg);
            // aggregate + selection carry the per-run outcome
            ReportRow row;
            row.kind = "sweep";
            row.engine = engine_name(e);
            row.candidate = axis + "=" + v;
            for (const ReportRow& rr : r.rows) {
                if (rr.kind == "aggregate") {
                    row.reads_product = rr.reads_product;
                    row.reads_customer = rr.reads_customer;
                    row.dominance_checks = rr.dominance_checks;
                    row.wall_ms = rr.wall_ms;
                } else if (rr.kind == "selection") {
                    row.score = rr.score;
                    row.extra = rr.extra;
                }
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace rskyline
