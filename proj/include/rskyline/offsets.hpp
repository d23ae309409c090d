#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "rskyline/core.hpp"

// Side-split offset space used by the query engines.
//
// Folding every point to its absolute offsets from q loses which side of q
// it came from, and a product can only beat q for customers that sit on its
// own side in each dimension where it differs from q.  Splitting every
// dimension into a positive-side and a negative-side offset keeps that
// information: x maps to (max(x_i - q_i, 0), max(q_i - x_i, 0)) per
// dimension, and dominance becomes a plain coordinate-wise test again
// (with strictness only meaningful on the nonzero sides).

namespace rskyline {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A point in side-split offset space: 2*D coordinates, all >= 0.
struct OffsetVec {
    int n = 0;  // 2 * dimension
    std::array<double, 2 * kMaxDim> v{};

    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
};

inline OffsetVec offsets_of(const Point& x, const Point& q) {
    OffsetVec o;
    o.n = 2 * x.dim();
    for (int i = 0; i < x.dim(); ++i) {
        const double s = x[i] - q[i];
        o[2 * i] = s > 0 ? s : 0.0;
        o[2 * i + 1] = s < 0 ? -s : 0.0;
    }
    return o;
}

inline OffsetVec halved(const OffsetVec& a) {
    OffsetVec h = a;
    for (int i = 0; i < h.n; ++i) h[i] /= 2.0;
    return h;
}

// Lowest offsets any point inside r can have, per side.
inline OffsetVec rect_min_offsets(const Rect& r, const Point& q) {
    OffsetVec o;
    o.n = 2 * r.dim();
    for (int i = 0; i < r.dim(); ++i) {
        const double lo = r.lo[static_cast<std::size_t>(i)] - q[i];
        const double hi = r.hi[static_cast<std::size_t>(i)] - q[i];
        o[2 * i] = lo > 0 ? lo : 0.0;      // min positive-side offset
        o[2 * i + 1] = hi < 0 ? -hi : 0.0; // min negative-side offset
    }
    return o;
}

inline OffsetVec rect_max_offsets(const Rect& r, const Point& q) {
    OffsetVec o;
    o.n = 2 * r.dim();
    for (int i = 0; i < r.dim(); ++i) {
        const double lo = r.lo[static_cast<std::size_t>(i)] - q[i];
        const double hi = r.hi[static_cast<std::size_t>(i)] - q[i];
        o[2 * i] = hi > 0 ? hi : 0.0;
        o[2 * i + 1] = lo < 0 ? -lo : 0.0;
    }
    return o;
}

// a <= b on every side.
inline bool weak_le(const OffsetVec& a, const OffsetVec& b) {
    for (int i = 0; i < a.n; ++i) {
        if (a[i] > b[i]) return false;
    }
    return true;
}

// Exact dominance: a <= b everywhere and strictly below on a side where a
// is nonzero.  With a = half the offsets of product p and b = the offsets
// of customer c this is precisely "p beats q for c".
inline bool dom(const OffsetVec& a, const OffsetVec& b) {
    bool strict = false;
    for (int i = 0; i < a.n; ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] > 0 && a[i] < b[i]) strict = true;
    }
    return strict;
}

// Certificate that some real product dominates a region: `bound` is half
// the offsets an anchored corner guarantees, `wit` holds per-side strict
// witnesses (half offsets known to be positive for the witnessing product,
// +inf where no witness exists).  A target t is certainly dominated when
// bound <= t everywhere and t exceeds some witness strictly.
struct Certificate {
    OffsetVec bound;
    OffsetVec wit;
};

inline bool certifies(const Certificate& c, const OffsetVec& t) {
    bool strict = false;
    for (int i = 0; i < c.bound.n; ++i) {
        if (c.bound[i] > t[i]) return false;
        if (c.wit[i] < t[i]) strict = true;
    }
    return strict;
}

// Exact midpoint of a single product as a certificate.
inline Certificate midpoint_certificate(const OffsetVec& product_offsets) {
    Certificate c;
    c.bound = halved(product_offsets);
    c.wit.n = c.bound.n;
    for (int i = 0; i < c.bound.n; ++i) c.wit[i] = c.bound[i] > 0 ? c.bound[i] : kInf;
    return c;
}

// Certificates carried by a product bounding box.  A tight box has a real
// product on each face; anchoring one dimension to its nearer face and
// taking the outer offsets elsewhere bounds what that face point can
// dominate.  Dimensions whose minimum offset is positive on a side also
// give strict witnesses, since every point of the box clears them.
inline void rect_certificates(const Rect& r, const Point& q, std::vector<Certificate>& out) {
    const int d = r.dim();
    const OffsetVec mn = rect_min_offsets(r, q);
    const OffsetVec mx = rect_max_offsets(r, q);
    for (int j = 0; j < d; ++j) {
        const double lo = r.lo[static_cast<std::size_t>(j)] - q[static_cast<std::size_t>(j)];
        const double hi = r.hi[static_cast<std::size_t>(j)] - q[static_cast<std::size_t>(j)];
        // nearer face in dimension j, kept with its side
        double face = std::abs(lo) <= std::abs(hi) ? lo : hi;
        Certificate c;
        c.bound.n = 2 * d;
        c.wit.n = 2 * d;
        for (int i = 0; i < 2 * d; ++i) {
            c.bound[i] = mx[i] / 2.0;
            c.wit[i] = mn[i] > 0 ? mx[i] / 2.0 : kInf;
        }
        c.bound[2 * j] = face > 0 ? face / 2.0 : 0.0;
        c.bound[2 * j + 1] = face < 0 ? -face / 2.0 : 0.0;
        c.wit[2 * j] = face > 0 ? face / 2.0 : kInf;
        c.wit[2 * j + 1] = face < 0 ? -face / 2.0 : kInf;
        out.push_back(c);
    }
}

// True when midpoint a covers everything midpoint b can dominate: a is at
// most as far out on every side and nonzero wherever b is.
inline bool midpoint_subsumes(const OffsetVec& a, const OffsetVec& b) {
    for (int i = 0; i < a.n; ++i) {
        if (a[i] > b[i]) return false;
        if (b[i] > 0 && a[i] == 0) return false;
    }
    return true;
}

inline bool offsets_equal(const OffsetVec& a, const OffsetVec& b) {
    for (int i = 0; i < a.n; ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

// True when c makes c2 redundant: everything c2 certifies, c certifies.
inline bool subsumes(const Certificate& c, const Certificate& c2) {
    for (int i = 0; i < c.bound.n; ++i) {
        if (c.bound[i] > c2.bound[i] || c.wit[i] > c2.wit[i]) return false;
    }
    return true;
}

// Minimal set of certificates; every member is sound forever (it describes
// real data points), so insertion-time reduction is the only maintenance.
class CertificateFrontier {
public:
    bool insert(const Certificate& c, std::uint64_t& checks) {
        for (const Certificate& m : members_) {
            ++checks;
            if (subsumes(m, c)) return false;
        }
        std::size_t kept = 0;
        for (std::size_t i = 0; i < members_.size(); ++i) {
            ++checks;
            if (!subsumes(c, members_[i])) members_[kept++] = members_[i];
        }
        members_.resize(kept);
        members_.push_back(c);
        return true;
    }

    bool covers(const OffsetVec& t, std::uint64_t& checks) const {
        for (const Certificate& m : members_) {
            ++checks;
            if (certifies(m, t)) return true;
        }
        return false;
    }

    std::size_t size() const { return members_.size(); }
    const std::vector<Certificate>& members() const { return members_; }

private:
    std::vector<Certificate> members_;
};

// Skyline of exact product midpoints discovered so far.  Kept minimal under
// region subsumption: a midpoint is redundant when another one is at most as
// far out on every side and nonzero wherever it is.
class MidpointFrontier {
public:
    // Returns false when m is redundant.
    bool insert(const OffsetVec& m, std::uint64_t& checks) {
        for (const OffsetVec& s : members_) {
            ++checks;
            if (subsumes_mid(s, m)) return false;
        }
        std::size_t kept = 0;
        for (std::size_t i = 0; i < members_.size(); ++i) {
            ++checks;
            if (!subsumes_mid(m, members_[i])) members_[kept++] = members_[i];
        }
        members_.resize(kept);
        members_.push_back(m);
        return true;
    }

    bool dominates_point(const OffsetVec& t, std::uint64_t& checks) const {
        for (const OffsetVec& m : members_) {
            ++checks;
            if (dom(m, t)) return true;
        }
        return false;
    }

    bool weakly_covers(const OffsetVec& t, std::uint64_t& checks) const {
        for (const OffsetVec& m : members_) {
            ++checks;
            if (weak_le(m, t)) return true;
        }
        return false;
    }

    // No member may dominate another; used by tests.
    bool is_minimal() const {
        for (std::size_t i = 0; i < members_.size(); ++i) {
            for (std::size_t j = 0; j < members_.size(); ++j) {
                if (i != j && subsumes_mid(members_[i], members_[j])) return false;
            }
        }
        return true;
    }

    std::size_t size() const { return members_.size(); }
    const std::vector<OffsetVec>& members() const { return members_; }

private:
    static bool subsumes_mid(const OffsetVec& a, const OffsetVec& b) { return midpoint_subsumes(a, b); }

    std::vector<OffsetVec> members_;
};

}  // namespace rskyline
