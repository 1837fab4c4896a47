// command line front end: analysis, absorption, asymptotics, oracles
#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/asymptotics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/genfun.hpp"
#include "qwalk/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using njson = nlohmann::ordered_json;
using namespace qwalk;

namespace {

struct Options {
    std::string walk_path;
    std::string out = "-";
    std::string format = "json";
    int n0 = 0, m0 = 0; // start override when > 0
    int kmax = 50;
    int N = 600;
    long long i = 0, j = 0;
    double tol = 1e-4;
    std::string mode = "dp";
    long long paths = 1000000;
    std::uint64_t seed = 42;
    bool cgf = false;
    bool oracle = false;
};

WalkParams load_walk(const Options& o) {
    WalkParams w = WalkParams::from_json_file(o.walk_path);
    if (o.n0 > 0 || o.m0 > 0) {
        std::array<std::array<double, 3>, 3> p{};
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                p[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] = w.p(i, j);
        w = WalkParams(p, o.n0 > 0 ? o.n0 : w.n0(), o.m0 > 0 ? o.m0 : w.m0());
    }
    return w;
}

void emit(const Options& o, const std::string& text) {
    if (o.out == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + o.out);
    f << text << "\n";
}

std::string regime_name(const GroupInfo& g) {
    if (g.finite && g.ratio_den == 1)
        return g.ratio_num % 2 == 0 ? "omega-ratio-2N" : "omega-ratio-2N+1";
    return "omega-ratio-irrational";
}

const char* x3_regime_name(X3Regime r) {
    switch (r) {
    case X3Regime::SimplePole: return "simple-pole-at-x3";
    case X3Regime::Holomorphic: return "holomorphic-at-x3";
    default: return "algebraic-at-x3";
    }
}

njson group_json(const GroupInfo& g) {
    njson out;
    out["kind"] = g.finite ? "finite" : "infinite";
    if (g.finite) {
        out["order"] = g.order;
        out["ratio"] = {g.ratio_num, g.ratio_den};
    }
    out["ratio_raw"] = g.ratio;
    out["x3_regime"] = x3_regime_name(g.regime);
    return out;
}

njson cplx_json(cplx z) { return njson::array({z.real(), z.imag()}); }

int cmd_validate(const Options& o) {
    WalkParams w = load_walk(o);
    njson out;
    out["valid"] = true;
    out["drift"] = {w.drift_x(), w.drift_y()};
    out["start"] = {w.n0(), w.m0()};
    out["diagonal"] = w.is_diagonal();
    out["group_determinant"] = w.group_determinant();
    emit(o, out.dump(2));
    return 0;
}

int cmd_analyze(const Options& o) {
    WalkParams w = load_walk(o);
    Curve c(w);
    EllipticData ed(c);
    GroupInfo g = classify_walk(w);
    njson out;
    out["omega"] = {ed.omega1(), ed.omega2(), ed.omega3()};
    out["group"] = group_json(g);
    out["delta"] = w.group_determinant();
    const auto& bx = c.bx();
    const auto& by = c.by();
    out["branch_points"]["x"] = {bx.x1, bx.x2, bx.x3};
    if (bx.x4_infinite)
        out["branch_points"]["x"].push_back("inf");
    else
        out["branch_points"]["x"].push_back(bx.x4);
    out["branch_points"]["y"] = {by.x1, by.x2, by.x3};
    if (by.x4_infinite)
        out["branch_points"]["y"].push_back("inf");
    else
        out["branch_points"]["y"].push_back(by.x4);
    if (o.cgf) {
        Gluing gl(ed);
        auto m = gl.sample_m_curve(360);
        njson mc = njson::array(), wc = njson::array();
        for (const auto& t : m) {
            mc.push_back(cplx_json(t));
            wc.push_back(cplx_json(gl.w(t)));
        }
        out["cgf"]["m_curve"] = mc;
        out["cgf"]["w_on_m"] = wc;
        out["cgf"]["regime"] = x3_regime_name(g.regime);
        out["cgf"]["res_x2"] = gl.res_x2();
        if (g.regime == X3Regime::SimplePole) out["cgf"]["res_x3"] = gl.res_x3();
        if (g.regime != X3Regime::SimplePole) {
            out["cgf"]["w1_x3"] = gl.w1_x3();
            if (g.regime == X3Regime::Algebraic) out["cgf"]["w2_x3"] = gl.w2_x3();
        }
    }
    emit(o, out.dump(2));
    return 0;
}

int cmd_absorb(const Options& o) {
    WalkParams w = load_walk(o);
    AbsorptionGF gf(w);
    auto hk = gf.h_coeffs(o.kmax);
    auto htk = gf.htilde_coeffs(o.kmax);
    auto [lo, hi] = absorbed_bounds(w);
    if (o.format == "csv") {
        std::ostringstream s;
        s << "k,h,htilde";
        for (int k = 1; k <= o.kmax; ++k) {
            s << "\n" << k << "," << njson(hk[static_cast<size_t>(k)]).dump() << ","
              << njson(htk[static_cast<size_t>(k)]).dump();
        }
        emit(o, s.str());
        return 0;
    }
    njson out;
    out["h00"] = gf.h00();
    out["h"] = njson::array();
    out["htilde"] = njson::array();
    for (int k = 1; k <= o.kmax; ++k) {
        out["h"].push_back(hk[static_cast<size_t>(k)]);
        out["htilde"].push_back(htk[static_cast<size_t>(k)]);
    }
    out["total"] = gf.total_absorbed();
    out["bounds"] = {lo, hi};
    out["regime"] = regime_name(classify_walk(w));
    out["meta"]["h00_spread"] = gf.h00_spread();
    out["meta"]["start"] = {w.n0(), w.m0()};
    emit(o, out.dump(2));
    return 0;
}

int cmd_tails(const Options& o) {
    WalkParams w = load_walk(o);
    AbsorptionGF gf(w);
    auto t = tail_asymptotics(gf);
    auto hk = gf.h_coeffs(o.kmax);
    auto scaled = [&](int k) {
        return hk[static_cast<size_t>(k)] * std::pow(static_cast<double>(k), t.power) *
               std::pow(t.rate, k);
    };
    njson out;
    switch (t.regime) {
    case TailRegime::Even2N: out["regime"] = "omega-ratio-2N"; break;
    case TailRegime::Odd2N1: out["regime"] = "omega-ratio-2N+1"; break;
    default: out["regime"] = "omega-ratio-irrational"; break;
    }
    out["rate"] = t.rate;
    out["power"] = t.power;
    out["constant"] = t.constant;
    out["h1k_const"] = t.h1k_const;
    out["h2k_const"] = t.h2k_const;
    out["parity_factor"] = t.parity_factor;
    out["scaled_coefficients"] = njson::array();
    for (int k = 1; k <= o.kmax; ++k) out["scaled_coefficients"].push_back(scaled(k));
    if (o.oracle) {
        auto dp = dp_solve(w, o.N);
        int k2 = std::min(o.kmax, dp.n);
        int k1 = k2 / 2;
        auto dps = [&](int k) {
            return dp.h[static_cast<size_t>(k)] * std::pow(static_cast<double>(k), t.power) *
                   std::pow(t.rate, k);
        };
        out["oracle"]["N"] = dp.n;
        out["oracle"]["scaled_at_kmax"] = dps(k2);
        out["oracle"]["ratio_at_kmax"] = dps(k2) / t.constant;
        out["oracle"]["ratio_extrapolated"] = (2.0 * dps(k2) - dps(k1)) / t.constant;
    }
    emit(o, out.dump(2));
    return 0;
}

int cmd_green(const Options& o) {
    WalkParams w = load_walk(o);
    if (o.i <= 0 || o.j <= 0) throw ValidationError("green needs --i and --j >= 1");
    AbsorptionGF gf(w);
    double r = static_cast<double>(o.j) / static_cast<double>(o.i);
    njson out;
    out["i"] = o.i;
    out["j"] = o.j;
    double value = 0;
    if (r <= 0.05) {
        value = green_axis(gf, o.i, o.j);
        out["method"] = "axis";
    } else if (r >= 20.0) {
        AbsorptionGF gft(w.transposed());
        value = green_axis(gft, o.j, o.i);
        out["method"] = "axis-transposed";
    } else {
        value = green_interior(gf, o.i, o.j);
        out["method"] = "interior";
    }
    out["value"] = value;
    // overlap band: both formulas apply, report both and their spread
    if ((r >= 0.02 && r <= 0.05) || (r >= 20.0 && r <= 50.0)) {
        double axis = r <= 0.05 ? green_axis(gf, o.i, o.j)
                                : green_axis(AbsorptionGF(w.transposed()), o.j, o.i);
        double interior = green_interior(gf, o.i, o.j);
        out["value_axis"] = axis;
        out["value_interior"] = interior;
        out["note"] = "direction in the axis/interior overlap band; both values reported";
    }
    if (o.i <= 8 && o.j <= 8)
        out["residue_form"] = green_residue_form(gf, static_cast<int>(o.i),
                                                 static_cast<int>(o.j));
    if (o.oracle) {
        int n = std::max<long long>(o.N, 2 * std::max(o.i, o.j));
        auto dp = dp_solve(w, n);
        double g = dp.at(static_cast<int>(o.i), static_cast<int>(o.j));
        out["oracle"]["N"] = n;
        out["oracle"]["value"] = g;
        out["oracle"]["ratio"] = g != 0.0 ? value / g : 0.0;
    }
    emit(o, out.dump(2));
    return 0;
}

int cmd_oracle(const Options& o) {
    WalkParams w = load_walk(o);
    njson out;
    if (o.mode == "dp") {
        auto dp = dp_solve(w, o.N);
        out["mode"] = "dp";
        out["N"] = dp.n;
        out["h00"] = dp.h00;
        int kmax = std::min(o.kmax, dp.n);
        out["h"] = njson::array();
        out["htilde"] = njson::array();
        for (int k = 1; k <= kmax; ++k) {
            out["h"].push_back(dp.h[static_cast<size_t>(k)]);
            out["htilde"].push_back(dp.ht[static_cast<size_t>(k)]);
        }
        out["absorbed"] = dp.absorbed;
        out["escaped"] = dp.escaped;
        out["sweeps"] = dp.sweeps;
        out["residual"] = dp.residual;
    } else if (o.mode == "mc") {
        auto mc = mc_absorb(w, o.paths, o.seed);
        out["mode"] = "mc";
        out["paths"] = mc.paths;
        out["seed"] = o.seed;
        out["absorbed_x"] = mc.absorbed_x;
        out["absorbed_y"] = mc.absorbed_y;
        out["corner"] = mc.corner;
        out["escaped"] = mc.escaped;
        out["p_absorbed"] = mc.p_absorbed();
        out["sigma"] = mc.sigma_absorbed();
    } else {
        throw ValidationError("oracle --mode must be dp or mc");
    }
    emit(o, out.dump(2));
    return 0;
}

int cmd_compare(const Options& o) {
    WalkParams w = load_walk(o);
    AbsorptionGF gf(w);
    auto dp = dp_solve(w, o.N);
    int kmax = std::min(o.kmax, dp.n);
    auto hk = gf.h_coeffs(kmax);
    auto htk = gf.htilde_coeffs(kmax);

    struct Row {
        std::string name;
        double analytic, oracle, tol;
    };
    std::vector<Row> rows;
    rows.push_back({"h00", gf.h00(), dp.h00, o.tol});
    for (int k = 1; k <= kmax; ++k)
        rows.push_back({"h_" + std::to_string(k), hk[static_cast<size_t>(k)],
                        dp.h[static_cast<size_t>(k)], o.tol});
    for (int k = 1; k <= kmax; ++k)
        rows.push_back({"htilde_" + std::to_string(k), htk[static_cast<size_t>(k)],
                        dp.ht[static_cast<size_t>(k)], o.tol});
    // the truncated total is a lower bound, biased by the escape flux
    rows.push_back({"total", gf.total_absorbed(), dp.absorbed,
                    std::max(o.tol, 2.0 * dp.escaped + 1e-9)});

    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && std::abs(r.analytic - r.oracle) < r.tol;

    if (o.format == "csv") {
        std::ostringstream s;
        s << "name,analytic,oracle,delta,pass";
        for (const auto& r : rows) {
            double d = r.analytic - r.oracle;
            s << "\n" << r.name << "," << njson(r.analytic).dump() << ","
              << njson(r.oracle).dump() << "," << njson(d).dump() << ","
              << (std::abs(d) < r.tol ? "true" : "false");
        }
        emit(o, s.str());
    } else {
        njson out;
        out["N"] = dp.n;
        out["kmax"] = kmax;
        out["tol"] = o.tol;
        out["rows"] = njson::array();
        for (const auto& r : rows) {
            double d = r.analytic - r.oracle;
            njson jr;
            jr["name"] = r.name;
            jr["analytic"] = r.analytic;
            jr["oracle"] = r.oracle;
            jr["delta"] = d;
            jr["tol"] = r.tol;
            jr["pass"] = std::abs(d) < r.tol;
            out["rows"].push_back(jr);
        }
        out["all_pass"] = all_pass;
        emit(o, out.dump(2));
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quarter-plane absorbed random walks: exact and asymptotic absorption"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool needs_walk = true) {
        auto* w = sub->add_option("--walk", o.walk_path, "walk JSON file");
        if (needs_walk) w->required();
        sub->add_option("--out", o.out, "output path, - for stdout");
        sub->add_option("--format", o.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--n0", o.n0, "start override, x coordinate");
        sub->add_option("--m0", o.m0, "start override, y coordinate");
    };

    auto* validate = app.add_subcommand("validate", "check a walk file and print drift");
    add_common(validate);

    auto* analyze = app.add_subcommand("analyze", "periods, group, branch points");
    add_common(analyze);
    analyze->add_flag("--cgf", o.cgf, "emit the conformal gluing data");

    auto* absorb = app.add_subcommand("absorb", "absorption probabilities");
    add_common(absorb);
    absorb->add_option("--kmax", o.kmax, "number of coefficients");

    auto* tails = app.add_subcommand("tails", "tail asymptotics of h_k");
    add_common(tails);
    tails->add_option("--kmax", o.kmax, "scaled coefficients up to k");
    tails->add_flag("--oracle", o.oracle, "compare against the lattice oracle");
    tails->add_option("--N", o.N, "oracle truncation size");

    auto* green = app.add_subcommand("green", "Green function asymptotics at (i,j)");
    add_common(green);
    green->add_option("--i", o.i, "site x coordinate")->required();
    green->add_option("--j", o.j, "site y coordinate")->required();
    green->add_flag("--oracle", o.oracle, "compare against the lattice oracle");
    green->add_option("--N", o.N, "oracle truncation size");

    auto* oracle = app.add_subcommand("oracle", "truncated-lattice or Monte Carlo oracle");
    add_common(oracle);
    oracle->add_option("--mode", o.mode, "dp or mc")->check(CLI::IsMember({"dp", "mc"}));
    oracle->add_option("--N", o.N, "dp truncation size");
    oracle->add_option("--kmax", o.kmax, "coefficients to report");
    oracle->add_option("--paths", o.paths, "mc path count");
    oracle->add_option("--seed", o.seed, "mc seed");

    auto* compare = app.add_subcommand("compare", "analytic vs oracle discrepancy table");
    add_common(compare);
    compare->add_option("--kmax", o.kmax, "coefficients to compare");
    compare->add_option("--N", o.N, "oracle truncation size");
    compare->add_option("--tol", o.tol, "per-row gate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // help exits 0, any parse failure is an input error
    }

    try {
        if (o.format == "csv" && !(absorb->parsed() || compare->parsed()))
            throw ValidationError("csv output is only available for absorb and compare");
        if (validate->parsed()) return cmd_validate(o);
        if (analyze->parsed()) return cmd_analyze(o);
        if (absorb->parsed()) return cmd_absorb(o);
        if (tails->parsed()) return cmd_tails(o);
        if (green->parsed()) return cmd_green(o);
        if (oracle->parsed()) return cmd_oracle(o);
        if (compare->parsed()) return cmd_compare(o);
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericsError& e) {
        std::cerr << "numerics: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
