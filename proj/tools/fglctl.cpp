// Command-line front end: builds formal modules from Lubin-Tate parameters
// or JSON descriptors, runs the analyses, and emits deterministic text or
// JSON reports. Exit codes: 0 success, 1 failure (with a machine-readable
// error object), 2 usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fgl/descriptor.hpp"
#include "fgl/endo.hpp"
#include "fgl/galois.hpp"
#include "fgl/lubin_tate.hpp"
#include "fgl/torsion.hpp"

using namespace fgl;

namespace {

int env_default(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) return std::atoi(v);
    return fallback;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

FormalModule load_module(const std::string& path) {
    return module_from_json(ojson::parse(slurp(path)));
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

void emit(const ojson& j, const std::string& out_path) {
    emit_text(j.dump(2) + "\n", out_path);
}

std::string join_valuations(const std::vector<Rational>& vs) {
    std::string s;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ",";
        s += vs[i].str();
    }
    return s;
}

struct CommonOpts {
    std::string format = "text";
    std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& c, const char* default_format) {
    c.format = default_format;
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", c.output, "output path (default stdout)");
}

ojson torsion_level_json(const FormalModule& m, int n, bool certified) {
    DivisionFieldReport rep = division_field_report(m, n, certified);
    TorsionReport tr = torsion_valuations(m, n);
    ojson j;
    j["n"] = n;
    j["new_count"] = tr.new_point_count;
    j["valuation"] = join_valuations(tr.new_valuations);
    j["degree"] = rep.predicted_degree ? ojson(*rep.predicted_degree) : ojson(nullptr);
    j["e"] = rep.ramification_index ? ojson(*rep.ramification_index) : ojson(nullptr);
    j["totally_ramified"] =
        rep.totally_ramified ? ojson(*rep.totally_ramified) : ojson(nullptr);
    j["m"] = rep.m_value ? ojson(*rep.m_value) : ojson(nullptr);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Lubin-Tate formal group laws over unramified p-adic rings"};
    app.require_subcommand(1);

    const int def_N = env_default("FGL_DEFAULT_N", 12);
    const int def_depth = env_default("FGL_DEFAULT_DEPTH", 3);

    // ---- construct ----
    auto* c_cmd = app.add_subcommand("construct", "build a Lubin-Tate module");
    uint32_t c_p = 2;
    uint64_t c_q = 2;
    int c_N = 0, c_D = 0, c_f = 0;
    std::string c_frob;
    bool c_with_omega = false;
    CommonOpts c_opts;
    c_cmd->add_option("--p", c_p, "prime")->required();
    c_cmd->add_option("--q", c_q, "p^h, the Frobenius parameter")->required();
    c_cmd->add_option("--N", c_N, "p-adic precision exponent (default 12)");
    c_cmd->add_option("--D", c_D, "series cap (default max(16, q^2+1))");
    c_cmd->add_option("--ring-degree", c_f, "residue degree of the base ring (default h)");
    c_cmd->add_option("--frobenius", c_frob,
                      "comma-separated integer coefficients of X^1, X^2, ... "
                      "(default the canonical pX + X^q)");
    c_cmd->add_flag("--with-omega", c_with_omega,
                    "solve and embed the extra Teichmuller endomorphism");
    add_common(c_cmd, c_opts, "json");

    // ---- module-file commands ----
    auto* v_cmd = app.add_subcommand("verify", "check the group-law and module axioms");
    std::string v_in;
    CommonOpts v_opts;
    v_cmd->add_option("input", v_in, "module descriptor (path or -)")->required();
    add_common(v_cmd, v_opts, "text");

    auto* h_cmd = app.add_subcommand("height", "height of the module");
    std::string h_in;
    CommonOpts h_opts;
    h_cmd->add_option("input", h_in, "module descriptor")->required();
    add_common(h_cmd, h_opts, "text");

    auto* e_cmd = app.add_subcommand("endo", "detect the endomorphism ring");
    std::string e_in;
    int e_depth = 0;
    CommonOpts e_opts;
    e_cmd->add_option("input", e_in, "module descriptor")->required();
    e_cmd->add_option("--depth", e_depth, "residue depth m (default 3)");
    add_common(e_cmd, e_opts, "text");

    auto* i_cmd = app.add_subcommand("isom", "search for an isomorphism");
    std::string i_a, i_b;
    int i_depth = 0;
    CommonOpts i_opts;
    i_cmd->add_option("first", i_a, "module descriptor")->required();
    i_cmd->add_option("second", i_b, "module descriptor")->required();
    i_cmd->add_option("--depth", i_depth, "linear-coefficient depth (default 3)");
    add_common(i_cmd, i_opts, "text");

    auto* t_cmd = app.add_subcommand("torsion", "torsion and division-field analysis");
    std::string t_in;
    int t_n = 1;
    CommonOpts t_opts;
    t_cmd->add_option("input", t_in, "module descriptor")->required();
    t_cmd->add_option("--n", t_n, "highest torsion level")->required();
    add_common(t_cmd, t_opts, "text");

    auto* m_cmd = app.add_subcommand("mseq", "minimal-generator-count sequence");
    std::string m_in;
    int m_nmax = 1;
    CommonOpts m_opts;
    m_cmd->add_option("input", m_in, "module descriptor")->required();
    m_cmd->add_option("--max-level", m_nmax, "highest level")->required();
    add_common(m_cmd, m_opts, "text");

    auto* g_cmd = app.add_subcommand("galois", "finite-level unit-group image");
    g_cmd->set_help_flag("--help", "print help");  // frees -h / --h for the rank
    uint32_t g_p = 2;
    int g_h = 1, g_n = 1;
    CommonOpts g_opts;
    g_cmd->add_option("--p", g_p, "prime")->required();
    g_cmd->add_option("--h", g_h, "height / matrix rank")->required();
    g_cmd->add_option("--level", g_n, "level n")->required();
    add_common(g_cmd, g_opts, "text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_cmd->parsed()) {
            uint64_t t = c_q;
            int h = 0;
            while (t > 1 && t % c_p == 0) { t /= c_p; ++h; }
            if (t != 1 || h < 1) throw std::invalid_argument("q must be a positive power of p");
            int N = c_N > 0 ? c_N : def_N;
            long long defD = std::max<long long>(16, static_cast<long long>(c_q) * c_q + 1);
            int D = c_D > 0 ? c_D
                            : env_default("FGL_DEFAULT_D", static_cast<int>(defD));
            int f = c_f > 0 ? c_f : h;
            UnramifiedRing ring(c_p, f, N);

            Series fser(ring, D);
            if (c_frob.empty()) {
                fser = FrobeniusSeries::canonical(ring, c_q, D).series();
            } else {
                std::vector<long long> coeffs{0};
                std::stringstream ss(c_frob);
                std::string tok;
                while (std::getline(ss, tok, ',')) coeffs.push_back(std::stoll(tok));
                fser = Series::from_int_coeffs(ring, D, coeffs);
            }
            FrobeniusSeries fs = FrobeniusSeries::validate(fser, c_q);
            FormalModule mod = lt_group(fs);
            if (c_with_omega) {
                StructureSolveResult res = module_structure_solve(mod, c_q);
                if (!res.omega_series)
                    throw std::domain_error("omega solve obstructed at degree " +
                                            std::to_string(res.obstructed_degree));
                mod = FormalModule::trusted(mod.law(), mod.pi(), res.omega_series,
                                            std::min(mod.cert_prec(), res.cert_prec),
                                            mod.lt_q());
            }
            if (c_opts.format == "json") {
                emit(module_to_json(mod), c_opts.output);
            } else {
                std::ostringstream os;
                os << "Lubin-Tate module over " << ring.describe() << "\n"
                   << "  q = " << c_q << ", cap D = " << D << ", height "
                   << mod.height().str() << "\n"
                   << "  certified digits: " << mod.cert_prec() << "\n"
                   << "  pi: " << mod.pi().str() << "\n";
                emit_text(os.str(), c_opts.output);
            }
            return 0;
        }

        if (v_cmd->parsed()) {
            FormalModule mod = load_module(v_in);
            ojson j;
            j["schema"] = descriptor_schema;
            std::string failure;
            if (auto viol = check_group_law(mod.F())) failure = viol->str();
            if (failure.empty()) {
                try {
                    FormalModule revalidated(FormalGroupLaw::trusted(mod.F()), mod.pi(),
                                             mod.omega());
                } catch (const std::exception& e) {
                    failure = e.what();
                }
            }
            j["valid"] = failure.empty();
            if (!failure.empty()) j["violation"] = failure;
            if (v_opts.format == "json")
                emit(j, v_opts.output);
            else
                emit_text(failure.empty() ? "valid\n" : "INVALID: " + failure + "\n",
                          v_opts.output);
            return failure.empty() ? 0 : 1;
        }

        if (h_cmd->parsed()) {
            FormalModule mod = load_module(h_in);
            HeightResult h = mod.height();
            if (h_opts.format == "json") {
                ojson j;
                j["schema"] = descriptor_schema;
                j["exact"] = h.exact;
                if (h.exact)
                    j["h"] = h.h;
                else
                    j["lower"] = h.lower;
                emit(j, h_opts.output);
            } else {
                emit_text("h " + std::string(h.exact ? "= " : "> ") +
                              std::to_string(h.exact ? h.h : h.lower) + "\n",
                          h_opts.output);
            }
            return 0;
        }

        if (e_cmd->parsed()) {
            FormalModule mod = load_module(e_in);
            EndoRingReport rep = endo_ring(mod, e_depth > 0 ? e_depth : def_depth);
            if (e_opts.format == "json") {
                ojson j;
                j["schema"] = descriptor_schema;
                j["m"] = rep.m;
                ojson arr = ojson::array();
                for (const auto& c : rep.found_c) arr.push_back(c.str());
                j["found_c"] = arr;
                j["residue_degree"] = rep.residue_degree;
                j["full_height"] = rep.full_height;
                j["saturated"] = rep.saturated;
                emit(j, e_opts.output);
            } else {
                std::ostringstream os;
                os << "depth m = " << rep.m << ", detected " << rep.found_c.size()
                   << " residue classes\n"
                   << "residue degree " << rep.residue_degree << ", full height "
                   << (rep.full_height ? "yes" : "no") << ", saturated "
                   << (rep.saturated ? "yes" : "no") << "\n";
                emit_text(os.str(), e_opts.output);
            }
            return 0;
        }

        if (i_cmd->parsed()) {
            FormalModule a = load_module(i_a), b = load_module(i_b);
            IsoSearchResult r = isomorphism_search(a, b, i_depth > 0 ? i_depth : def_depth);
            ojson j;
            j["schema"] = descriptor_schema;
            j["isomorphic"] = r.witness.has_value();
            if (r.witness) {
                j["c"] = r.c->str();
                j["certified_digits"] = r.cert_prec;
                j["witness"] = series_to_json(*r.witness);
            } else {
                j["reason"] = r.absence == IsoSearchResult::Absence::height_mismatch
                                  ? "height_mismatch"
                                  : "no_candidate";
                if (r.obstruction_degree >= 0) j["obstruction_degree"] = r.obstruction_degree;
            }
            if (i_opts.format == "json")
                emit(j, i_opts.output);
            else
                emit_text(r.witness
                              ? "isomorphic (c = " + r.c->str() + ")\n"
                              : "not isomorphic: " + j["reason"].get<std::string>() + "\n",
                          i_opts.output);
            return r.witness ? 0 : 1;
        }

        if (t_cmd->parsed()) {
            FormalModule mod = load_module(t_in);
            bool certified = default_full_height_evidence(mod);
            if (t_opts.format == "json") {
                ojson j;
                j["schema"] = descriptor_schema;
                ojson levels = ojson::array();
                for (int n = 1; n <= t_n; ++n)
                    levels.push_back(torsion_level_json(mod, n, certified));
                j["levels"] = levels;
                emit(j, t_opts.output);
            } else {
                std::ostringstream os;
                os << "  n  new_count  valuation  degree  e  totally_ramified  m\n";
                for (int n = 1; n <= t_n; ++n) {
                    ojson row = torsion_level_json(mod, n, certified);
                    os << "  " << n << "  " << row["new_count"] << "  "
                       << row["valuation"].get<std::string>() << "  "
                       << (row["degree"].is_null() ? "?" : row["degree"].dump()) << "  "
                       << (row["e"].is_null() ? "?" : row["e"].dump()) << "  "
                       << (row["totally_ramified"].is_null() ? "?"
                                                             : row["totally_ramified"].dump())
                       << "  " << (row["m"].is_null() ? "?" : row["m"].dump()) << "\n";
                }
                emit_text(os.str(), t_opts.output);
            }
            return 0;
        }

        if (m_cmd->parsed()) {
            FormalModule mod = load_module(m_in);
            MSequence seq = m_sequence(mod, m_nmax);
            ojson j;
            j["schema"] = descriptor_schema;
            j["upper_bound"] = seq.upper_bound;
            j["monotone"] = seq.monotone_certified;
            j["last_certified_level"] = seq.last_certified_level;
            ojson levels = ojson::array();
            for (const auto& e : seq.entries) {
                ojson row;
                row["n"] = e.n;
                row["m_lower"] = e.m_lower;
                row["m"] = e.m_value ? ojson(*e.m_value) : ojson(nullptr);
                levels.push_back(row);
            }
            j["levels"] = levels;
            if (m_opts.format == "json")
                emit(j, m_opts.output);
            else {
                std::ostringstream os;
                os << "upper bound h_r = " << seq.upper_bound << ", monotone "
                   << (seq.monotone_certified ? "yes" : "no") << "\n";
                for (const auto& e : seq.entries)
                    os << "  n = " << e.n << ": m in [" << e.m_lower << ", "
                       << seq.upper_bound << "]"
                       << (e.m_value ? ", certified m = " + std::to_string(*e.m_value) : "")
                       << "\n";
                emit_text(os.str(), m_opts.output);
            }
            return 0;
        }

        if (g_cmd->parsed()) {
            FiniteMatrixGroup G = unit_group_image(g_p, g_h, g_n);
            GaloisLevelReport rep = derived_series(G);
            ojson j;
            j["schema"] = descriptor_schema;
            j["p"] = g_p;
            j["h"] = g_h;
            j["n"] = g_n;
            j["order"] = rep.order;
            j["abelian"] = rep.abelian;
            j["derived_lengths"] = rep.derived_lengths;
            j["solvable"] = rep.solvable_at_level;
            if (g_opts.format == "json")
                emit(j, g_opts.output);
            else {
                std::ostringstream os;
                os << "order " << rep.order << ", abelian " << (rep.abelian ? "yes" : "no")
                   << ", solvable " << (rep.solvable_at_level ? "yes" : "no") << "\n";
                emit_text(os.str(), g_opts.output);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        ojson err;
        err["schema"] = descriptor_schema;
        err["error"]["type"] = typeid(e).name();
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
    return 2;
}
