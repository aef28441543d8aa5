#pragma once

#include <Eigen/Dense>
#include <functional>

namespace hybridcorr {

struct SphereOptimizerConfig {
    int theta_points = 32;
    int phi_points = 64;
    int refine_max_iter = 200;
    double tol = 1e-8;  // objective spread at termination
};

struct SphereMinimum {
    double value;
    Eigen::Vector3d direction;
};

// Minimizes f over unit vectors: full (theta, phi) grid seed including both
// poles, then Nelder-Mead refinement in angle space from the best grid point.
SphereMinimum minimize_over_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                   const SphereOptimizerConfig& cfg = {});

} // namespace hybridcorr
