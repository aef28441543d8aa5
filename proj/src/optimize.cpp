#include "hybridcorr/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hybridcorr {

namespace {

Eigen::Vector3d unit_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

} // namespace

SphereMinimum minimize_over_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                   const SphereOptimizerConfig& cfg) {
    const double pi = M_PI;
    double best = std::numeric_limits<double>::infinity();
    double best_th = 0.0, best_ph = 0.0;

    const int nt = std::max(2, cfg.theta_points);
    const int np = std::max(1, cfg.phi_points);
    for (int i = 0; i < nt; ++i) {
        double th = pi * i / (nt - 1);
        bool pole = (i == 0 || i == nt - 1);
        int nphi = pole ? 1 : np;
        for (int j = 0; j < nphi; ++j) {
            double ph = 2.0 * pi * j / np;
            double v = f(unit_from_angles(th, ph));
            if (v < best) { best = v; best_th = th; best_ph = ph; }
        }
    }

    // Nelder-Mead in (theta, phi); the angle map is total, so no constraints.
    auto g = [&](const Eigen::Vector2d& a) { return f(unit_from_angles(a(0), a(1))); };
    std::array<Eigen::Vector2d, 3> sx = {
        Eigen::Vector2d(best_th, best_ph),
        Eigen::Vector2d(best_th + 0.15, best_ph),
        Eigen::Vector2d(best_th, best_ph + 0.15)};
    std::array<double, 3> fv = {g(sx[0]), g(sx[1]), g(sx[2])};

    for (int it = 0; it < cfg.refine_max_iter; ++it) {
        std::array<int, 3> ord = {0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::array<Eigen::Vector2d, 3> s2 = {sx[ord[0]], sx[ord[1]], sx[ord[2]]};
        std::array<double, 3> f2 = {fv[ord[0]], fv[ord[1]], fv[ord[2]]};
        sx = s2; fv = f2;
        if (fv[2] - fv[0] < cfg.tol) break;

        Eigen::Vector2d centroid = 0.5 * (sx[0] + sx[1]);
        Eigen::Vector2d xr = centroid + (centroid - sx[2]);
        double fr = g(xr);
        if (fr < fv[0]) {
            Eigen::Vector2d xe = centroid + 2.0 * (centroid - sx[2]);
            double fe = g(xe);
            if (fe < fr) { sx[2] = xe; fv[2] = fe; }
            else { sx[2] = xr; fv[2] = fr; }
        } else if (fr < fv[1]) {
            sx[2] = xr; fv[2] = fr;
        } else {
            Eigen::Vector2d xc = centroid + 0.5 * (sx[2] - centroid);
            double fc = g(xc);
            if (fc < fv[2]) { sx[2] = xc; fv[2] = fc; }
            else {
                sx[1] = sx[0] + 0.5 * (sx[1] - sx[0]); fv[1] = g(sx[1]);
                sx[2] = sx[0] + 0.5 * (sx[2] - sx[0]); fv[2] = g(sx[2]);
            }
        }
    }

    int bi = int(std::min_element(fv.begin(), fv.end()) - fv.begin());
    double vbest = fv[bi];
    if (vbest <= best) {
        return {vbest, unit_from_angles(sx[bi](0), sx[bi](1))};
    }
    return {best, unit_from_angles(best_th, best_ph)};
}

} // namespace hybridcorr
