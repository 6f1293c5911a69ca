#include "fgl/torsion.hpp"

#include <algorithm>
#include <numeric>

namespace fgl {
namespace {

struct Point {
    long long x;
    long long v;
};

// is c on or above the segment a-b at abscissa c.x? (integer cross product)
bool on_or_above(const Point& a, const Point& b, long long x, long long v) {
    // line value at x: a.v + (x - a.x) * (b.v - a.v) / (b.x - a.x)
    __int128 lhs = static_cast<__int128>(v - a.v) * (b.x - a.x);
    __int128 rhs = static_cast<__int128>(b.v - a.v) * (x - a.x);
    return lhs >= rhs;
}

}  // namespace

NewtonPolygon newton_polygon(const Series& s, long long lo, long long hi) {
    if (lo < 0 || hi > s.cap() || lo > hi)
        throw std::invalid_argument("newton_polygon: bad span");
    const UnramifiedRing& R = s.ring();

    std::vector<Point> pts;
    std::vector<Point> markers;  // (index, lower bound) pairs
    for (long long i = lo; i <= hi; ++i) {
        Valuation v = s.coeff(static_cast<int>(i)).valuation();
        if (v.exact)
            pts.push_back({i, v.v});
        else
            markers.push_back({i, v.v});
    }
    if (pts.empty())
        throw precision_error("newton_polygon: no coefficient on the span has exact valuation",
                              lo, R.N());

    // lower convex hull, left to right
    std::vector<Point> hull;
    for (const Point& pt : pts) {
        while (hull.size() >= 2) {
            const Point& a = hull[hull.size() - 2];
            const Point& b = hull[hull.size() - 1];
            // drop b when pt is on or below the a-b line continuation
            __int128 cross = static_cast<__int128>(b.x - a.x) * (pt.v - a.v) -
                             static_cast<__int128>(b.v - a.v) * (pt.x - a.x);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }

    // certification against the indistinguishable-from-zero coefficients
    for (const Point& mk : markers) {
        if (mk.x < hull.front().x)
            throw precision_error(
                "newton_polygon: leading coefficient indistinguishable from zero at index " +
                    std::to_string(mk.x),
                mk.x, static_cast<int>(mk.v));
        if (mk.x > hull.back().x) {
            // can only hide roots of valuation <= 0 when the bound clears the
            // last vertex
            if (mk.v < hull.back().v)
                throw precision_error(
                    "newton_polygon: trailing coefficient undecidable at index " +
                        std::to_string(mk.x),
                    mk.x, static_cast<int>(mk.v));
            continue;
        }
        // interior: the bound must clear the hull
        for (size_t t = 0; t + 1 < hull.size(); ++t) {
            if (hull[t].x <= mk.x && mk.x <= hull[t + 1].x) {
                if (!on_or_above(hull[t], hull[t + 1], mk.x, mk.v))
                    throw precision_error(
                        "newton_polygon: coefficient undecidable against the hull at index " +
                            std::to_string(mk.x),
                        mk.x, static_cast<int>(mk.v));
            }
        }
    }

    NewtonPolygon np;
    np.lo = lo;
    np.hi = hi;
    np.start_x = hull.front().x;
    for (size_t t = 0; t + 1 < hull.size(); ++t) {
        long long dx = hull[t + 1].x - hull[t].x;
        long long dv = hull[t].v - hull[t + 1].v;
        Rational rv(dv, dx);
        if (rv > Rational(0))
            np.segments.push_back(PolygonSegment{rv, dx});
    }
    return np;
}

Series pi_power(const FormalModule& m, int n) {
    if (n < 1) throw std::invalid_argument("pi_power: level must be >= 1");
    HeightResult h = m.height();
    if (h.exact) {
        uint64_t q = 1;
        for (int i = 0; i < h.h; ++i) q *= m.ring().p();
        long long need = required_cap_for_level(q, n);
        if (need > m.cap())
            throw std::invalid_argument("pi_power: cap too small, need D >= " +
                                        std::to_string(need));
    }
    Series r = m.pi();
    for (int i = 1; i < n; ++i) r = m.pi().compose(r);
    return r;
}

TorsionReport torsion_valuations(const FormalModule& m, int n) {
    TorsionReport rep;
    rep.n = n;
    if (n == 0) return rep;  // the zero level holds only the origin
    if (n < 0) throw std::invalid_argument("torsion: level must be >= 0");
    HeightResult h = m.height();
    if (!h.exact)
        throw precision_error("torsion: height is only bounded at this cap (h " + h.str() + ")");
    uint64_t q = 1;
    for (int i = 0; i < h.h; ++i) q *= m.ring().p();
    rep.q = q;
    long long qn = required_cap_for_level(q, n);
    if (qn > m.cap())
        throw std::invalid_argument("torsion: cap too small, need D >= " + std::to_string(qn));

    Series P = pi_power(m, n);
    NewtonPolygon np = newton_polygon(P, 1, qn);
    rep.cumulative_count = np.total_length();
    if (rep.cumulative_count != qn - 1)
        throw std::domain_error(
            "torsion: polygon accounts for " + std::to_string(rep.cumulative_count) +
            " roots instead of q^n - 1 = " + std::to_string(qn - 1) +
            " (corrupted multiplier?)");

    long long prev = n >= 2 ? qn / static_cast<long long>(q) : 1;
    long long x = np.start_x;
    for (const auto& seg : np.segments) {
        if (x >= prev) {
            rep.new_point_count += seg.length;
            rep.new_valuations.push_back(seg.root_valuation);
        } else if (x + seg.length > prev) {
            throw std::domain_error("torsion: polygon has no vertex at q^(n-1); level-" +
                                    std::to_string(n) + " points are not separated");
        }
        x += seg.length;
    }
    return rep;
}

bool default_full_height_evidence(const FormalModule& m) {
    if (!m.lt_q()) return false;
    HeightResult h = m.height();
    if (!h.exact) return false;
    return m.ring().f() % h.h == 0;
}

DivisionFieldReport division_field_report(const FormalModule& m, int n,
                                          bool full_height_certified) {
    if (n < 1) throw std::invalid_argument("division_field_report: level must be >= 1");
    DivisionFieldReport rep;
    rep.n = n;
    rep.full_height_certified = full_height_certified;
    TorsionReport tr = torsion_valuations(m, n);
    HeightResult h = m.height();
    rep.m_upper = h.h;

    long long ram = 1;
    for (const auto& v : tr.new_valuations) ram = std::lcm(ram, v.den);
    rep.ramification_index = ram;

    if (full_height_certified) {
        long long pred = 1;
        for (int i = 0; i < n - 1; ++i) pred *= static_cast<long long>(tr.q);
        pred *= static_cast<long long>(tr.q) - 1;
        rep.predicted_degree = pred;
        rep.totally_ramified = (pred == ram);
        bool single = false;
        for (const auto& v : tr.new_valuations)
            if (v.den == pred) single = true;
        rep.single_generator = single;
        if (single) rep.m_value = 1;
    }
    return rep;
}

DivisionFieldReport division_field_report(const FormalModule& m, int n) {
    return division_field_report(m, n, default_full_height_evidence(m));
}

MSequence m_sequence(const FormalModule& m, int n_max, bool full_height_certified) {
    MSequence seq;
    HeightResult h = m.height();
    if (!h.exact)
        throw precision_error("m_sequence: height is only bounded at this cap");
    seq.upper_bound = h.h;
    uint64_t q = 1;
    for (int i = 0; i < h.h; ++i) q *= m.ring().p();

    int prev_certified = 0;
    for (int n = 1; n <= n_max; ++n) {
        long long need;
        try {
            need = required_cap_for_level(q, n);
        } catch (const std::invalid_argument&) {
            break;
        }
        if (need > m.cap()) break;  // cap exhausted: truncate the sequence
        DivisionFieldReport rep = division_field_report(m, n, full_height_certified);
        MSequenceEntry e{n, rep.m_lower, rep.m_value};
        if (e.m_value) {
            if (prev_certified != 0 && *e.m_value < prev_certified)
                seq.monotone_certified = false;
            prev_certified = *e.m_value;
        }
        seq.entries.push_back(e);
        seq.last_certified_level = n;
    }
    return seq;
}

MSequence m_sequence(const FormalModule& m, int n_max) {
    return m_sequence(m, n_max, default_full_height_evidence(m));
}

}  // namespace fgl
