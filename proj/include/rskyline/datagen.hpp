#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "rskyline/core.hpp"

// Seeded synthetic data in the three classic skyline benchmark flavors plus
// CSV ingestion.  Domain is [0, 1000] per dimension throughout.
//
//   uniform        independent per-dimension draws
//   correlated     a diagonal position shared by all dimensions plus a small
//                  per-dimension spread, so good values co-occur
//   anticorrelated points jittered around the plane sum(x) = D/2, so a good
//                  value in one dimension comes with worse ones elsewhere

namespace rskyline {

inline constexpr double kDomainMax = 1000.0;

enum class Distribution { uniform, correlated, anticorrelated };

struct GenSpec {
    Distribution dist = Distribution::uniform;
    std::size_t n = 0;
    int dim = 0;
    std::uint64_t seed = 0;
};

struct NoiseSpec {
    double variance = 0;
    std::uint64_t seed = 0;
};

inline double clamp_domain(double v) { return v < 0 ? 0 : (v > kDomainMax ? kDomainMax : v); }

inline std::vector<Point> generate(const GenSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("need at least one point");
    if (spec.dim < 2 || spec.dim > kMaxDim) throw std::invalid_argument("dimension out of supported range");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> spread(0.0, 0.1);
    std::normal_distribution<double> jitter(0.0, 0.05);

    std::vector<Point> out;
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Point p;
        p.id = static_cast<PointId>(i);
        p.coords.resize(static_cast<std::size_t>(spec.dim));
        switch (spec.dist) {
            case Distribution::uniform:
                for (int d = 0; d < spec.dim; ++d) p.coords[static_cast<std::size_t>(d)] = uni(rng) * kDomainMax;
                break;
            case Distribution::correlated: {
                const double base = uni(rng);
                for (int d = 0; d < spec.dim; ++d)
                    p.coords[static_cast<std::size_t>(d)] = clamp_domain((base + spread(rng)) * kDomainMax);
                break;
            }
            case Distribution::anticorrelated: {
                double sum = 0;
                std::vector<double> u(static_cast<std::size_t>(spec.dim));
                for (int d = 0; d < spec.dim; ++d) {
                    u[static_cast<std::size_t>(d)] = uni(rng);
                    sum += u[static_cast<std::size_t>(d)];
                }
                const double shift = (sum - spec.dim / 2.0) / spec.dim;
                for (int d = 0; d < spec.dim; ++d)
                    p.coords[static_cast<std::size_t>(d)] =
                        clamp_domain((u[static_cast<std::size_t>(d)] - shift + jitter(rng)) * kDomainMax);
                break;
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Per-coordinate gaussian noise centered on the original value with the
// given variance, clamped back into the domain.
inline std::vector<Point> derive_noisy(const std::vector<Point>& points, const NoiseSpec& noise) {
    if (noise.variance < 0) throw std::invalid_argument("variance must be non-negative");
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> g(0.0, std::sqrt(noise.variance));
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& p : points) {
        Point d = p;
        if (noise.variance > 0) {
            for (double& c : d.coords) c = clamp_domain(c + g(rng));
        }
        out.push_back(std::move(d));
    }
    return out;
}

namespace detail {

// locale-independent: the format uses '.' regardless of environment
inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t' || *(e - 1) == '\r')) --e;
    if (b == e) return false;
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// Reads a rectangular numeric CSV; a non-numeric first row is treated as a
// header.  With `id_column`, the first field carries the point id, otherwise
// ids are row indices.  With `normalize`, each dimension is mapped affinely
// onto [0, 1000]; constant columns collapse to 0.
inline std::vector<Point> ingest_csv(const std::string& path, bool normalize, bool id_column = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Point> pts;
    std::string line;
    std::size_t row = 0;
    int width = -1;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        const auto fields = detail::split_csv_line(line);
        std::vector<double> vals(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!detail::parse_double(fields[i], vals[i])) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first_data_row) continue;  // header row
            throw std::runtime_error("non-numeric cell at row " + std::to_string(row) + " of " + path);
        }
        first_data_row = false;
        if (width < 0) width = static_cast<int>(fields.size());
        else if (static_cast<int>(fields.size()) != width)
            throw std::runtime_error("ragged row " + std::to_string(row) + " of " + path);
        Point p;
        if (id_column) {
            p.id = static_cast<PointId>(vals[0]);
            p.coords.assign(vals.begin() + 1, vals.end());
        } else {
            p.id = static_cast<PointId>(pts.size());
            p.coords = std::move(vals);
        }
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw std::runtime_error("no data rows in " + path);
    const int d = pts.front().dim();
    if (d < 2 || d > kMaxDim) throw std::runtime_error("unsupported dimensionality in " + path);
    if (normalize) {
        for (int i = 0; i < d; ++i) {
            double lo = pts.front()[i], hi = pts.front()[i];
            for (const Point& p : pts) {
                lo = std::min(lo, p[i]);
                hi = std::max(hi, p[i]);
            }
            for (Point& p : pts) {
                double& c = p.coords[static_cast<std::size_t>(i)];
                c = hi > lo ? (c - lo) / (hi - lo) * kDomainMax : 0.0;
            }
        }
    }
    return pts;
}

// One point per line, plain decimal fields.  Written to a temp file and
// renamed into place.
inline void write_csv(const std::string& path, const std::vector<Point>& pts) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out.setf(std::ios::fixed);
        out.precision(6);
        for (const Point& p : pts) {
            for (int i = 0; i < p.dim(); ++i) {
                if (i) out << ',';
                out << p[i];
            }
            out << '\n';
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rskyline
