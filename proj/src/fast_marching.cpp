#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "redgeo/model.hpp"

namespace redgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapItem {
    double d;
    int idx;
    bool operator>(const HeapItem& o) const { return d > o.d; }
};

// Quadratic upwind update for the Eikonal equation |grad d| = 1 with grid
// spacings ha (rho direction) and hb (arc direction).
double eikonal_update(double va, double ha, double vb, double hb) {
    const bool ua = std::isfinite(va);
    const bool ub = std::isfinite(vb) && hb > 1e-12;
    if (ua && ub) {
        const double lo = std::max(va, vb);
        const double ia = 1.0 / (ha * ha), ib = 1.0 / (hb * hb);
        const double A = ia + ib;
        const double B = -2.0 * (va * ia + vb * ib);
        const double C = va * va * ia + vb * vb * ib - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double d = (-B + std::sqrt(disc)) / (2.0 * A);
            if (d >= lo) return d;
        }
    }
    double best = kInf;
    if (ua) best = std::min(best, va + ha);
    if (ub) best = std::min(best, vb + hb);
    return best;
}

}  // namespace

std::shared_ptr<RadialProfile> build_warped_profile(const FnTau& warp, double base_offset,
                                                    double s_max, int n_rho, int n_theta,
                                                    int bins) {
    const double rho_max = base_offset + s_max * 1.01;
    const double h_rho = rho_max / (n_rho - 1);
    const double h_theta = M_PI / (n_theta - 1);
    auto id = [n_theta](int i, int j) { return i * n_theta + j; };

    std::vector<double> wcol(n_rho);
    for (int i = 0; i < n_rho; ++i) wcol[i] = warp(i * h_rho);

    std::vector<double> dist(static_cast<size_t>(n_rho) * n_theta, kInf);
    std::vector<char> frozen(dist.size(), 0);

    // Seed a disc around the base point (base_offset, theta=0) with the
    // locally flat distance; kills the point-source error of first-order FMM.
    const double seed_radius = 12.0 * h_rho;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;
    for (int i = 0; i < n_rho; ++i) {
        const double rho = i * h_rho;
        if (std::abs(rho - base_offset) > seed_radius) continue;
        const double wmid = warp(0.5 * (rho + base_offset));
        for (int j = 0; j < n_theta; ++j) {
            const double arc = wmid * j * h_theta;
            if (arc > seed_radius) break;
            const double d = std::hypot(rho - base_offset, arc);
            if (d <= seed_radius) {
                dist[id(i, j)] = d;
                frozen[id(i, j)] = 1;
                heap.push({d, id(i, j)});
            }
        }
    }

    auto relax = [&](int i, int j) {
        const int k = id(i, j);
        if (frozen[k]) return;
        double va = kInf, vb = kInf;
        if (i > 0) va = std::min(va, dist[id(i - 1, j)]);
        if (i + 1 < n_rho) va = std::min(va, dist[id(i + 1, j)]);
        if (j > 0) vb = std::min(vb, dist[id(i, j - 1)]);
        if (j + 1 < n_theta) vb = std::min(vb, dist[id(i, j + 1)]);
        const double hb = wcol[i] * h_theta;
        const double cand = eikonal_update(va, h_rho, vb, hb);
        if (cand < dist[k]) {
            dist[k] = cand;
            heap.push({cand, k});
        }
    };

    while (!heap.empty()) {
        const HeapItem top = heap.top();
        heap.pop();
        const int k = top.idx;
        if (top.d > dist[k]) continue;
        frozen[k] = 1;
        if (dist[k] > s_max * 1.005) continue;  // beyond the table, stop growing
        const int i = k / n_theta, j = k % n_theta;
        if (i > 0) relax(i - 1, j);
        if (i + 1 < n_rho) relax(i + 1, j);
        if (j > 0) relax(i, j - 1);
        if (j + 1 < n_theta) relax(i, j + 1);
    }

    auto prof = std::make_shared<RadialProfile>();
    prof->s_edges.resize(bins + 1);
    for (int k = 0; k <= bins; ++k) prof->s_edges[k] = s_max * k / bins;
    prof->mass.assign(bins, 0.0);
    std::vector<double> sd(bins, 0.0);
    for (int i = 0; i < n_rho; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const double d = dist[id(i, j)];
            if (!(d < s_max)) continue;
            double mu = wcol[i] * h_rho * h_theta * 2.0;  // theta-reflection factor
            if (j == 0 || j == n_theta - 1) mu *= 0.5;
            if (i == 0 || i == n_rho - 1) mu *= 0.5;
            const int k = std::min(static_cast<int>(d / s_max * bins), bins - 1);
            prof->mass[k] += mu;
            sd[k] += mu * d;
        }
    }
    prof->s_center.resize(bins);
    prof->cum_mass.resize(bins);
    double acc = 0.0;
    for (int k = 0; k < bins; ++k) {
        prof->s_center[k] = prof->mass[k] > 0.0
                                ? sd[k] / prof->mass[k]
                                : 0.5 * (prof->s_edges[k] + prof->s_edges[k + 1]);
        acc += prof->mass[k];
        prof->cum_mass[k] = acc;
    }
    return prof;
}

}  // namespace redgeo
