#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rskyline/bench.hpp"

// Command-line front end: dataset generation, single-query workloads, k-MAC
// evaluation and parameter sweeps.  Exit codes: 0 ok, 1 bad usage or
// validation, 2 runtime failure.

namespace {

void add_common(CLI::App* cmd, rskyline::RunConfig& cfg, std::string& dist) {
    cmd->add_option("--products", cfg.products, "products: CSV path, <dist>:<n>, or <n>");
    cmd->add_option("--customers", cfg.customers, "customers: CSV path, <dist>:<n>, or <n>");
    cmd->add_option("--candidates", cfg.candidates, "candidates: CSV path, <dist>:<n>, or <n>");
    cmd->add_option("--d", cfg.d, "dimensionality (2-8)")->check(CLI::Range(2, 8));
    cmd->add_option("--dist", dist, "distribution for generated data: un, ac, co");
    cmd->add_option("--fanout", cfg.fanout, "R-tree fanout override (0 = from page size)");
    cmd->add_option("--page-bytes", cfg.page_bytes, "page size driving the default fanout");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_flag("--id-col", cfg.id_column, "first CSV column is the point id");
    cmd->add_flag("!--raw", cfg.normalize, "skip [0,1000] normalization of ingested CSVs");
    cmd->add_option("--out", cfg.out, "report CSV path");
}

int run(int argc, char** argv) {
    CLI::App app{"reverse-skyline and k-most-attractive-candidates benchmark kit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write a synthetic dataset CSV");
    std::string gen_dist = "un";
    rskyline::GenSpec spec;
    std::string gen_out = "data.csv";
    std::int64_t gen_n = 1000;
    gen->add_option("--dist", gen_dist, "un, ac, or co");
    gen->add_option("--n", gen_n, "number of points")->required();
    gen->add_option("--d", spec.dim, "dimensionality (2-8)")->required()->check(CLI::Range(2, 8));
    gen->add_option("--seed", spec.seed, "seed");
    gen->add_option("--out", gen_out, "output path");
    double noise_variance = -1;
    gen->add_option("--noise-variance", noise_variance,
                    "perturb each generated point with gaussian noise of this variance");

    // query
    auto* query = app.add_subcommand("query", "run brs/rsl per candidate");
    rskyline::RunConfig qcfg;
    std::string qdist = "un", qengine = "rsl";
    add_common(query, qcfg, qdist);
    query->add_option("--engine", qengine, "brs or rsl");
    query->add_flag("--verify", qcfg.verify, "cross-check each result against the brute-force oracle");

    // kmac
    auto* kmac = app.add_subcommand("kmac", "evaluate a k-MAC query");
    rskyline::RunConfig kcfg;
    std::string kdist = "un", kengine = "basic-rsl";
    add_common(kmac, kcfg, kdist);
    kmac->add_option("--engine", kengine, "basic-brs, basic-rsl, batch, or bb");
    kmac->add_option("--k", kcfg.k, "selection size");
    kmac->add_option("--batch-size", kcfg.batch_size, "candidates per batch");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "repeat kmac along one parameter");
    rskyline::RunConfig scfg;
    std::string sdist = "un", sengines = "basic-rsl";
    std::string axis;
    std::string values;
    add_common(sweep, scfg, sdist);
    sweep->add_option("--engine", sengines, "comma-separated kmac engines");
    sweep->add_option("--k", scfg.k, "selection size");
    sweep->add_option("--batch-size", scfg.batch_size, "candidates per batch");
    sweep->add_option("--axis", axis, "P, C, Q, D, or B")->required();
    sweep->add_option("--values", values, "comma-separated axis values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
    }

    if (gen->parsed()) {
        spec.dist = rskyline::parse_dist(gen_dist);
        if (gen_n < 1) throw std::invalid_argument("--n must be positive");
        spec.n = static_cast<std::size_t>(gen_n);
        auto pts = rskyline::generate(spec);
        if (noise_variance >= 0) pts = rskyline::derive_noisy(pts, {noise_variance, spec.seed + 17});
        rskyline::write_csv(gen_out, pts);
        std::cout << "wrote " << pts.size() << " points to " << gen_out << "\n";
        return 0;
    }
    if (query->parsed()) {
        qcfg.dist = rskyline::parse_dist(qdist);
        qcfg.engine = rskyline::parse_engine(qengine);
        const auto report = rskyline::cmd_query(qcfg);
        rskyline::write_report_csv(qcfg.out, report);
        rskyline::write_progress_csv(rskyline::progress_path(qcfg.out), report);
        std::cout << "wrote " << qcfg.out << " and " << rskyline::progress_path(qcfg.out) << "\n";
        return 0;
    }
    if (kmac->parsed()) {
        kcfg.dist = rskyline::parse_dist(kdist);
        kcfg.engine = rskyline::parse_engine(kengine);
        const auto report = rskyline::cmd_kmac(kcfg);
        rskyline::write_report_csv(kcfg.out, report);
        for (const auto& row : report.rows) {
            if (row.kind == "selection")
                std::cout << "joint score " << row.score << " chosen " << row.extra << "\n";
        }
        std::cout << "wrote " << kcfg.out << "\n";
        return 0;
    }
    if (sweep->parsed()) {
        scfg.dist = rskyline::parse_dist(sdist);
        std::vector<rskyline::BenchEngine> engines;
        std::vector<std::string> vals;
        {
            std::stringstream ss(sengines);
            std::string tok;
            while (std::getline(ss, tok, ',')) engines.push_back(rskyline::parse_engine(tok));
        }
        {
            std::stringstream ss(values);
            std::string tok;
            while (std::getline(ss, tok, ',')) vals.push_back(tok);
        }
        if (engines.empty() || vals.empty()) throw std::invalid_argument("--engine and --values must be non-empty");
        const auto report = rskyline::cmd_sweep(axis, vals, scfg, engines);
        rskyline::write_report_csv(scfg.out, report);
        std::cout << "wrote " << scfg.out << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
