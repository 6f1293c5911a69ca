#pragma once
// Newton-polygon analysis of iterated multiplier series: torsion-point
// valuations and counts per level, division-field degree and ramification
// predictions, and the minimal-generator-count sequence. Torsion points are
// never represented as field elements; every invariant derives from exact
// rational polygon slopes and unit-group orders.

#include "fgl/formal_group.hpp"
#include "fgl/rational.hpp"

namespace fgl {

struct PolygonSegment {
    Rational root_valuation;
    long long length = 0;
    friend bool operator==(const PolygonSegment& a, const PolygonSegment& b) {
        return a.root_valuation == b.root_valuation && a.length == b.length;
    }
};

struct NewtonPolygon {
    std::vector<PolygonSegment> segments;  // root valuations, strictly decreasing
    long long lo = 0, hi = 0;              // analyzed degree span
    long long start_x = 0;                 // abscissa of the first hull vertex
    long long total_length() const {
        long long t = 0;
        for (const auto& s : segments) t += s.length;
        return t;
    }
};

// Lower convex hull of (i, v(a_i)) across the span, reported as root
// valuations with multiplicities; only segments with positive root valuation
// (roots inside the maximal ideal) are kept. Coefficients indistinguishable
// from zero must be certifiably on or above the hull.
NewtonPolygon newton_polygon(const Series& s, long long lo, long long hi);

// n-fold composition of the multiplier; cap >= q^n enforced.
Series pi_power(const FormalModule& m, int n);

struct TorsionReport {
    int n = 0;
    long long new_point_count = 0;
    std::vector<Rational> new_valuations;
    long long cumulative_count = 0;
    uint64_t q = 0;
    friend bool operator==(const TorsionReport& a, const TorsionReport& b) {
        return a.n == b.n && a.new_point_count == b.new_point_count &&
               a.new_valuations == b.new_valuations &&
               a.cumulative_count == b.cumulative_count && a.q == b.q;
    }
};

// Polygon of [p^n] restricted to the degrees that are new at level n; counts
// cross-checked against q^n - 1.
TorsionReport torsion_valuations(const FormalModule& m, int n);

struct DivisionFieldReport {
    int n = 0;
    bool full_height_certified = false;
    std::optional<long long> predicted_degree;    // q^{n-1}(q-1), certified only
    std::optional<long long> ramification_index;  // denominators of new valuations
    std::optional<bool> totally_ramified;
    std::optional<bool> single_generator;
    int m_lower = 1;
    std::optional<int> m_value;
    int m_upper = 0;  // h_r
};

// Full-height evidence defaults to the module's own certificate: a
// Frobenius-series pedigree with h dividing the ring degree. Callers holding
// an endo-ring report can pass their own verdict.
bool default_full_height_evidence(const FormalModule& m);
DivisionFieldReport division_field_report(const FormalModule& m, int n,
                                          bool full_height_certified);
DivisionFieldReport division_field_report(const FormalModule& m, int n);

struct MSequenceEntry {
    int n = 0;
    int m_lower = 1;
    std::optional<int> m_value;
};

struct MSequence {
    std::vector<MSequenceEntry> entries;
    int upper_bound = 0;             // h_r
    bool monotone_certified = true;  // certified values are nondecreasing
    int last_certified_level = 0;
};

MSequence m_sequence(const FormalModule& m, int n_max, bool full_height_certified);
MSequence m_sequence(const FormalModule& m, int n_max);

}  // namespace fgl
