#include "qwalk/oracle.hpp"
#include "qwalk/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace qwalk {

DpResult dp_solve(const WalkParams& w, int n, double tol, int max_sweeps) {
    if (n < 4) throw ValidationError("box size too small");
    if (w.n0() > n || w.m0() > n) throw ValidationError("start outside the box");

    DpResult r;
    r.n = n;
    const int s = n + 2;
    r.green.assign(static_cast<size_t>(s) * s, 0.0);
    auto G = [&](int i, int j) -> double& {
        return r.green[static_cast<size_t>(i) * s + j];
    };

    double p[3][3];
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) p[di + 1][dj + 1] = w.p(di, dj);

    // G(i,j) = delta + sum_d p(d) G((i,j)-d); zero Dirichlet data outside [1,n]^2
    auto update_cell = [&](int i, int j) {
        double v = (i == w.n0() && j == w.m0()) ? 1.0 : 0.0;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                double pp = p[di + 1][dj + 1];
                if (pp == 0.0) continue;
                int pi = i - di, pj = j - dj;
                if (pi < 1 || pj < 1 || pi > n || pj > n) continue;
                v += pp * G(pi, pj);
            }
        double old = G(i, j);
        G(i, j) = v;
        return std::abs(v - old);
    };

    double res = 0;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        res = 0;
        switch (sweep % 4) {
            case 0:
                for (int i = 1; i <= n; ++i)
                    for (int j = 1; j <= n; ++j) res = std::max(res, update_cell(i, j));
                break;
            case 1:
                for (int i = n; i >= 1; --i)
                    for (int j = n; j >= 1; --j) res = std::max(res, update_cell(i, j));
                break;
            case 2:
                for (int j = 1; j <= n; ++j)
                    for (int i = n; i >= 1; --i) res = std::max(res, update_cell(i, j));
                break;
            default:
                for (int j = n; j >= 1; --j)
                    for (int i = 1; i <= n; ++i) res = std::max(res, update_cell(i, j));
                break;
        }
        if (res < tol && sweep >= 4) break;
    }
    r.sweeps = sweep + 1;
    r.residual = res;
    if (res >= tol) throw NumericsError("green function sweeps did not converge");

    // absorption reads off the last interior row/column
    r.h.assign(static_cast<size_t>(n) + 1, 0.0);
    r.ht.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        double hk = 0, htk = 0;
        for (int di = -1; di <= 1; ++di) {
            int i = k - di;
            if (i >= 1 && i <= n) hk += p[di + 1][0] * G(i, 1);
            if (i >= 1 && i <= n) htk += p[0][di + 1] * G(1, i);
        }
        r.h[static_cast<size_t>(k)] = hk;
        r.ht[static_cast<size_t>(k)] = htk;
        r.absorbed += hk + htk;
    }
    r.h00 = p[0][0] * G(1, 1);
    r.absorbed += r.h00;

    // all flux not staying in the box and not landing on a recorded
    // absorption site leaves the truncated system
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i > 1 && i < n && j > 1 && j < n) continue;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    double pp = p[di + 1][dj + 1];
                    if (pp == 0.0) continue;
                    int ti = i + di, tj = j + dj;
                    bool inside = ti >= 1 && ti <= n && tj >= 1 && tj <= n;
                    bool recorded = (tj == 0 && ti <= n) || (ti == 0 && tj <= n);
                    if (!inside && !recorded) r.escaped += pp * G(i, j);
                }
        }
    return r;
}

double McResult::sigma_absorbed() const {
    double pa = p_absorbed();
    return std::sqrt(pa * (1.0 - pa) / static_cast<double>(paths));
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

int thread_count() {
    if (const char* e = std::getenv("QWALK_THREADS")) {
        int v = std::atoi(e);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc > 16 ? 16 : hc);
}

} // namespace

McResult mc_absorb(const WalkParams& w, long long paths, std::uint64_t seed, int escape_radius) {
    constexpr int kBuckets = 64;
    McResult total;
    total.paths = paths;
    total.hx_counts.assign(kBuckets, 0);
    total.hy_counts.assign(kBuckets, 0);

    double cum[9];
    int step_i[9], step_j[9];
    {
        int m = 0;
        double acc = 0;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                acc += w.p(di, dj);
                cum[m] = acc;
                step_i[m] = di;
                step_j[m] = dj;
                ++m;
            }
        cum[7] = 1.0 + 1e-15; // guard against rounding in the final bucket
        (void)cum[8];
    }

    int nt = thread_count();
    std::vector<McResult> part(static_cast<size_t>(nt));
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        part[static_cast<size_t>(t)].hx_counts.assign(kBuckets, 0);
        part[static_cast<size_t>(t)].hy_counts.assign(kBuckets, 0);
        pool.emplace_back([&, t]() {
            McResult& out = part[static_cast<size_t>(t)];
            for (long long path = t; path < paths; path += nt) {
                // counter-keyed stream: identical results for any thread count
                std::uint64_t state =
                    seed ^ (0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(path + 1));
                int i = w.n0(), j = w.m0();
                while (true) {
                    if (j == 0) {
                        if (i == 0) ++out.corner;
                        else {
                            ++out.absorbed_x;
                            if (i < kBuckets) ++out.hx_counts[static_cast<size_t>(i)];
                        }
                        break;
                    }
                    if (i == 0) {
                        ++out.absorbed_y;
                        if (j < kBuckets) ++out.hy_counts[static_cast<size_t>(j)];
                        break;
                    }
                    if (i >= escape_radius && j >= escape_radius) {
                        ++out.escaped;
                        break;
                    }
                    double u = uniform01(state);
                    int m = 0;
                    while (u > cum[m]) ++m;
                    i += step_i[m];
                    j += step_j[m];
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : part) {
        total.absorbed_x += p.absorbed_x;
        total.absorbed_y += p.absorbed_y;
        total.corner += p.corner;
        total.escaped += p.escaped;
        for (int k = 0; k < kBuckets; ++k) {
            total.hx_counts[static_cast<size_t>(k)] += p.hx_counts[static_cast<size_t>(k)];
            total.hy_counts[static_cast<size_t>(k)] += p.hy_counts[static_cast<size_t>(k)];
        }
    }
    return total;
}

} // namespace qwalk
