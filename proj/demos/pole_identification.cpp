// Recover three resonances from Taylor data at a complex center.
#include <cmath>
#include <cstdio>

#include <pademor/pademor.hpp>

using namespace pademor;

int main() {
    const cplx z0(10.0, 0.5);
    const auto map = maps::make_spectral_oracle({8.0, 10.0, 13.0}, cvector(3, 1.0), z0, std::sqrt(10.0));

    for (index_t M : {2u, 4u, 6u, 10u}) {
        const auto cfg = pade::PadeConfig::with_defaults(M, 3, z0, 7.0, 14.0);
        const auto a = pade::build_pade(*map, cfg);
        std::printf("M=%2zu rho=%.3f lambda_min=%.3e roots:", static_cast<std::size_t>(M), cfg.rho,
                    a.diagnostics().smallest_eigenvalue);
        for (const auto& r : a.poles()) std::printf("  %.10f%+.1ei", r.real(), r.imag());
        std::printf("\n");
    }

    // surrogate vs truth on a few points of the interval
    const auto a = pade::build_pade(*map, pade::PadeConfig::with_defaults(10, 3, z0, 7.0, 14.0));
    for (double z : {7.5, 9.0, 11.5, 14.0}) {
        const auto u = map->evaluate(z);
        std::printf("z=%5.2f  ||u||=%.6e  rel.err=%.2e\n", z, norm(u), norm(a.evaluate(z) - u) / norm(u));
    }
}
