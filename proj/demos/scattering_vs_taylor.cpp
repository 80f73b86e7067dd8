// Frequency sweep of a square scatterer: Pade (10,2) against the degree-12 Taylor polynomial.
#include <cmath>
#include <cstdio>

#include <pademor/pademor.hpp>

using namespace pademor;

int main() {
    const cplx z0(3.0, 0.5);
    maps::ScatteringSetup s;
    s.h = 0.1;
    maps::FdScatteringMap map(maps::scattering_grid(s), s.theta, z0);
    const auto table = pade::TaylorTable::from_map(map, 12);

    std::printf("%6s %12s %12s %12s\n", "z", "||u||", "pade", "taylor");
    for (double z = 2.0; z <= 4.0 + 1e-12; z += 0.25) {
        pade::PadeConfig c;
        c.z0 = z0;
        c.rho = std::abs(z - z0);
        c.E = 12;
        c.M = 10;
        c.N = 2;
        const auto pade_a = pade::build_pade(table, c);
        c.M = 12;
        c.N = 0;
        const auto taylor = pade::build_pade(table, c);
        const auto u = map.evaluate(z);
        const double n = norm(u);
        std::printf("%6.2f %12.5e %12.3e %12.3e\n", z, n, norm(pade_a.evaluate(z) - u) / n,
                    norm(taylor.evaluate(z) - u) / n);
    }
}
