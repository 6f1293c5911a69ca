#include "fgl/descriptor.hpp"

#include <memory>

#include "fgl/lubin_tate.hpp"

namespace fgl {

ojson series_to_json(const Series& s) {
    ojson arr = ojson::array();
    for (int k = 0; k <= s.cap(); ++k) arr.push_back(s.coeff(k).str());
    return arr;
}

Series series_from_json(const UnramifiedRing& ring, int cap, const ojson& j) {
    if (!j.is_array() || static_cast<int>(j.size()) != cap + 1)
        throw std::invalid_argument("series: expected an array of cap+1 coefficients");
    Series s(ring, cap);
    for (int k = 0; k <= cap; ++k)
        s.set_coeff(k, parse_element(ring, j[k].get<std::string>()));
    return s;
}

ojson series2_to_json(const Series2& s) {
    ojson rows = ojson::array();
    for (int i = 0; i <= s.cap(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; i + j <= s.cap(); ++j) row.push_back(s.get(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Series2 series2_from_json(const UnramifiedRing& ring, int cap, const ojson& j) {
    if (!j.is_array() || static_cast<int>(j.size()) != cap + 1)
        throw std::invalid_argument("series2: expected cap+1 rows");
    Series2 s(ring, cap);
    for (int i = 0; i <= cap; ++i) {
        const ojson& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cap - i + 1)
            throw std::invalid_argument("series2: row " + std::to_string(i) +
                                        " must hold cap-i+1 entries");
        for (int k = 0; i + k <= cap; ++k)
            s.set(i, k, parse_element(ring, row[k].get<std::string>()));
    }
    return s;
}

ojson module_to_json(const FormalModule& m) {
    ojson j;
    j["schema"] = descriptor_schema;
    j["p"] = m.ring().p();
    j["f"] = m.ring().f();
    j["N"] = m.ring().N();
    j["D"] = m.cap();
    j["F"] = series2_to_json(m.F());
    j["pi"] = series_to_json(m.pi());
    if (m.omega()) j["omega"] = series_to_json(*m.omega());
    return j;
}

FormalModule module_from_json(const ojson& j) {
    if (j.contains("schema") && j["schema"].get<int>() != descriptor_schema)
        throw std::invalid_argument("descriptor: unsupported schema version");
    uint32_t p = j.at("p").get<uint32_t>();
    int f = j.at("f").get<int>();
    int N = j.at("N").get<int>();
    int D = j.at("D").get<int>();
    // rings are owned statically per (p, f, N) so descriptors stay valid for
    // the process lifetime
    static std::vector<std::unique_ptr<UnramifiedRing>> pool;
    UnramifiedRing* ring = nullptr;
    for (auto& r : pool)
        if (r->p() == p && r->f() == f && r->N() == N) ring = r.get();
    if (!ring) {
        pool.push_back(std::make_unique<UnramifiedRing>(p, f, N));
        ring = pool.back().get();
    }

    Series2 F = series2_from_json(*ring, D, j.at("F"));
    Series pi = series_from_json(*ring, D, j.at("pi"));
    std::optional<Series> omega;
    if (j.contains("omega")) omega = series_from_json(*ring, D, j.at("omega"));

    // recover the Frobenius certificate when the stored multiplier is one
    std::optional<uint64_t> lt_q;
    try {
        HeightResult h = height_from_multiplier(pi);
        if (h.exact) {
            uint64_t q = 1;
            for (int i = 0; i < h.h; ++i) q *= p;
            if (static_cast<uint64_t>(D) >= q) {
                FrobeniusSeries::validate(pi, q);
                lt_q = q;
            }
        }
    } catch (...) {
        lt_q.reset();
    }
    return FormalModule::trusted(FormalGroupLaw::trusted(std::move(F)), std::move(pi),
                                 std::move(omega), N, lt_q);
}

}  // namespace fgl
