#include "qwalk/walk.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/tolerances.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qwalk {

WalkParams::WalkParams(const std::array<std::array<double, 3>, 3>& p, int n0, int m0)
    : n0_(n0), m0_(m0) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p_[static_cast<size_t>(i)][static_cast<size_t>(j)] = p[static_cast<size_t>(i)][static_cast<size_t>(j)];
    validate(true);
}

WalkParams::WalkParams(const std::array<std::array<double, 3>, 3>& p, int n0, int m0, SkipDriftCheck)
    : n0_(n0), m0_(m0) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p_[static_cast<size_t>(i)][static_cast<size_t>(j)] = p[static_cast<size_t>(i)][static_cast<size_t>(j)];
    validate(false);
}

void WalkParams::validate(bool require_drift) const {
    double sum = 0.0;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            double v = p(i, j);
            if (v < 0.0 || v > 1.0) throw ValidationError("jump probability outside [0,1]");
            sum += v;
        }
    if (p(0, 0) != 0.0) throw ValidationError("p(0,0) must be zero");
    if (std::abs(sum - 1.0) > tol::prob_sum) throw ValidationError("jump probabilities must sum to 1");
    if (n0_ < 1 || m0_ < 1) throw ValidationError("start point must lie in the open quadrant");

    // walk must be genuinely two-dimensional: x and y components both move
    bool horiz = p(1, -1) + p(1, 0) + p(1, 1) > 0.0 && p(-1, -1) + p(-1, 0) + p(-1, 1) > 0.0;
    bool vert = p(-1, 1) + p(0, 1) + p(1, 1) > 0.0 && p(-1, -1) + p(0, -1) + p(1, -1) > 0.0;
    if (!horiz || !vert) throw ValidationError("walk is degenerate in one coordinate");

    // no three consecutive zeros in the cyclic list of the eight jump weights
    const double cyc[8] = {p(1, 1), p(1, 0), p(1, -1), p(0, -1),
                           p(-1, -1), p(-1, 0), p(-1, 1), p(0, 1)};
    for (int k = 0; k < 8; ++k) {
        if (cyc[k] == 0.0 && cyc[(k + 1) % 8] == 0.0 && cyc[(k + 2) % 8] == 0.0)
            throw ValidationError("support too thin: three consecutive zero jump weights");
    }

    if (require_drift && (drift_x() <= 0.0 || drift_y() <= 0.0))
        throw ValidationError("both drift components must be positive");
}

double WalkParams::drift_x() const {
    double m = 0.0;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) m += i * p(i, j);
    return m;
}

double WalkParams::drift_y() const {
    double m = 0.0;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) m += j * p(i, j);
    return m;
}

double WalkParams::group_determinant() const {
    const double a11 = p(1, 1), a12 = p(1, 0), a13 = p(1, -1);
    const double a21 = p(0, 1), a22 = -1.0, a23 = p(0, -1);
    const double a31 = p(-1, 1), a32 = p(-1, 0), a33 = p(-1, -1);
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
}

bool WalkParams::is_diagonal() const {
    return p(1, 0) == 0.0 && p(-1, 0) == 0.0 && p(0, 1) == 0.0 && p(0, -1) == 0.0;
}

WalkParams WalkParams::transposed() const {
    std::array<std::array<double, 3>, 3> q{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q[static_cast<size_t>(i)][static_cast<size_t>(j)] = p_[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return WalkParams(q, m0_, n0_, SkipDriftCheck{});
}

namespace {
// JSON layout: "p" rows are j=+1, j=0, j=-1 (top to bottom), columns i=-1,0,+1
WalkParams from_nlohmann(const nlohmann::json& j, bool strict_drift) {
    if (!j.contains("p") || !j["p"].is_array() || j["p"].size() != 3)
        throw ValidationError("expected a 3x3 \"p\" matrix");
    std::array<std::array<double, 3>, 3> p{};
    for (int row = 0; row < 3; ++row) {
        const auto& r = j["p"][static_cast<size_t>(row)];
        if (!r.is_array() || r.size() != 3) throw ValidationError("expected a 3x3 \"p\" matrix");
        for (int col = 0; col < 3; ++col) {
            int i = col - 1, jj = 1 - row;
            p[static_cast<size_t>(i + 1)][static_cast<size_t>(jj + 1)] = r[static_cast<size_t>(col)].get<double>();
        }
    }
    int n0 = 1, m0 = 1;
    if (j.contains("start")) {
        n0 = j["start"][0].get<int>();
        m0 = j["start"][1].get<int>();
    }
    // reshuffle into the constructor's [i+1][j+1] layout
    std::array<std::array<double, 3>, 3> q{};
    for (int i = -1; i <= 1; ++i)
        for (int jj = -1; jj <= 1; ++jj) q[static_cast<size_t>(i + 1)][static_cast<size_t>(jj + 1)] = p[static_cast<size_t>(i + 1)][static_cast<size_t>(jj + 1)];
    if (strict_drift) return WalkParams(q, n0, m0);
    return WalkParams(q, n0, m0, WalkParams::SkipDriftCheck{});
}
} // namespace

std::string WalkParams::to_json() const {
    nlohmann::json j;
    j["p"] = nlohmann::json::array();
    for (int row = 0; row < 3; ++row) {
        nlohmann::json r = nlohmann::json::array();
        for (int col = 0; col < 3; ++col) {
            int i = col - 1, jj = 1 - row;
            r.push_back(p(i, jj));
        }
        j["p"].push_back(r);
    }
    j["start"] = {n0_, m0_};
    return j.dump(2);
}

WalkParams WalkParams::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("bad JSON: ") + e.what());
    }
    return from_nlohmann(j, true);
}

WalkParams WalkParams::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

static std::array<std::array<double, 3>, 3> make_p(
    double p11, double p10, double p1m1, double p01, double p0m1,
    double pm11, double pm10, double pm1m1) {
    std::array<std::array<double, 3>, 3> q{};
    auto set = [&](int i, int j, double v) { q[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] = v; };
    set(1, 1, p11); set(1, 0, p10); set(1, -1, p1m1);
    set(0, 1, p01); set(0, -1, p0m1);
    set(-1, 1, pm11); set(-1, 0, pm10); set(-1, -1, pm1m1);
    return q;
}

WalkParams WalkParams::simple_cross() {
    return WalkParams(make_p(0, 0.3, 0, 0.3, 0.2, 0, 0.2, 0), 1, 1);
}

WalkParams WalkParams::order6_zero_drift() {
    const double t = 1.0 / 3.0;
    return WalkParams(make_p(0, t, 0, 0, t, t, 0, 0), 1, 1, SkipDriftCheck{});
}

WalkParams WalkParams::order6_drifted() {
    return WalkParams(make_p(0, 0.36, 0, 0, 0.30, 0.34, 0, 0), 1, 1);
}

WalkParams WalkParams::order6_low() {
    const double t = 1.0 / 3.0;
    return WalkParams(make_p(0, t, 0, t, 0, 0, 0, t), 1, 1, SkipDriftCheck{});
}

WalkParams WalkParams::order6_low_drifted() {
    return WalkParams(make_p(0, 0.35, 0, 0.35, 0, 0, 0, 0.30), 1, 1);
}

WalkParams WalkParams::order8() {
    return WalkParams(make_p(0.3, 0.3, 0, 0, 0, 0, 0.2, 0.2), 1, 1);
}

WalkParams WalkParams::diagonal_fixture() {
    return WalkParams(make_p(0.4, 0, 0.2, 0, 0, 0.2, 0, 0.2), 1, 1);
}

} // namespace qwalk
