#pragma once

#include <cmath>
#include <memory>

#include "pademor/maps/helmholtz_map.hpp"

namespace pademor::maps {

// Plane wave from the lower half (index n1) hitting x2 = 0; upper half has n2.
struct TransmissionWave {
    double kappa, theta, n1, n2;
    cplx k1, k2;  // transmitted wave vector
    cplx r, t;    // reflection / transmission coefficients

    TransmissionWave(double kappa_, double theta_, double n1_, double n2_)
        : kappa(kappa_), theta(theta_), n1(n1_), n2(n2_) {
        if (!(theta >= 0.0 && theta < 0.5 * pi)) throw ArgumentError("TransmissionWave: theta must be in [0, pi/2)");
        if (!(n1 > 0.0 && n2 > 0.0)) throw ArgumentError("TransmissionWave: refractive indices must be positive");
        const double d1 = std::cos(theta), d2 = std::sin(theta);
        k1 = kappa * n1 * d1;
        // principal root; +0.0 imaginary part keeps a negative radicand on the upper branch
        k2 = kappa * std::sqrt(cplx(n2 * n2 - (n1 * d1) * (n1 * d1), +0.0));
        const double kd2 = kappa * n1 * d2;
        r = -(k2 - kd2) / (k2 + kd2);
        t = 1.0 + r;
    }

    cplx operator()(Point x) const {
        const cplx i(0.0, 1.0);
        if (x.y >= 0.0) return t * std::exp(i * (k1 * x.x + k2 * x.y));
        const double d1 = std::cos(theta), d2 = std::sin(theta);
        const double k = kappa * n1;
        return std::exp(i * k * (d1 * x.x + d2 * x.y)) + r * std::exp(i * k * (d1 * x.x - d2 * x.y));
    }

    // arccos(n2/n1) when n1 > n2, otherwise 0 (no total reflection)
    static double critical_angle(double n1, double n2) { return n1 > n2 ? std::acos(n2 / n1) : 0.0; }
};

inline cplx exact_transmission(Point x, double kappa, double theta, double n1, double n2) {
    return TransmissionWave(kappa, theta, n1, n2)(x);
}

struct TransmissionSetup {
    index_t cells = 32;       // per side of (-1,1)^2, even
    double theta = 29.0 * pi / 180.0;
    double n1 = 2.0;
    double n2 = 1.0;
    double kappa = 11.0;      // wavenumber of the boundary data
};

inline std::vector<double> transmission_eps2(const Grid& g, double n1, double n2) {
    std::vector<double> e(g.size());
    const double half = 0.5 * g.h();
    for (index_t k = 0; k < g.size(); ++k) {
        const double y = g.point(k).y;
        e[k] = std::abs(y) < half ? 0.5 * (n1 * n1 + n2 * n2) : (y < 0.0 ? n1 * n1 : n2 * n2);
    }
    return e;
}

inline GridPtr transmission_grid(index_t cells) {
    if (cells < 2 || cells % 2 != 0)
        throw ArgumentError("transmission grid needs an even cell count so the interface is a grid line");
    return std::make_shared<const Grid>(fd::dirichlet_square(-1.0, 1.0, cells));
}

// -Lap u - z eps2 u = 0 on (-1,1)^2, u = exact wave (at kappa) on the boundary.
inline std::shared_ptr<FdHelmholtzMap> make_transmission_map(const TransmissionSetup& s, cplx center,
                                                             double weight = -1.0) {
    auto grid = transmission_grid(s.cells);
    const TransmissionWave wave(s.kappa, s.theta, s.n1, s.n2);
    HelmholtzProblem p;
    p.grid = grid;
    p.eps2 = transmission_eps2(*grid, s.n1, s.n2);
    p.lifting = harmonic_lifting(*grid, [&](Point x) { return wave(x); });
    p.weight = weight > 0.0 ? weight : std::sqrt(center.real());
    return std::make_shared<FdHelmholtzMap>(std::move(p), center);
}

}  // namespace pademor::maps
