#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "pademor/maps/response_map.hpp"

namespace pademor::maps {

enum class ModalVariant { load_driven, lifting_driven };

// S(z) = sum_j f_j/(lambda_j - z) phi_j                (load driven)
// S(z) = sum_j z w_j/(lambda_j - z) phi_j + w_g        (lifting driven)
//
// With no modes given, phi_j is the j-th unit vector of a spectral space.
class ModalOracle : public ResponseMap {
public:
    struct Options {
        ModalVariant variant = ModalVariant::load_driven;
        std::optional<SpaceVector> lifting;
        std::optional<SparseMatrix> orthonormality_mass;  // defaults to the space mass
    };

    ModalOracle(SpacePtr space, cplx center, std::vector<double> poles, std::vector<SpaceVector> modes, cvector loads,
                Options opt)
        : ResponseMap(std::move(space), center),
          poles_(std::move(poles)),
          modes_(std::move(modes)),
          loads_(std::move(loads)),
          variant_(opt.variant),
          lifting_(std::move(opt.lifting)) {
        validate();
        if (!modes_.empty()) check_orthonormal(opt.orthonormality_mass ? *opt.orthonormality_mass : this->space()->mass());
    }

    // Spectral form: the space dimension equals the number of poles.
    ModalOracle(SpacePtr space, cplx center, std::vector<double> poles, cvector loads,
                ModalVariant variant = ModalVariant::load_driven, std::optional<SpaceVector> lifting = std::nullopt)
        : ResponseMap(std::move(space), center),
          poles_(std::move(poles)),
          loads_(std::move(loads)),
          variant_(variant),
          lifting_(std::move(lifting)) {
        if (this->space()->size() != poles_.size())
            throw ArgumentError("ModalOracle: spectral form needs one space dimension per pole");
        validate();
    }

    const std::vector<double>& poles() const noexcept { return poles_; }
    const cvector& loads() const noexcept { return loads_; }
    ModalVariant variant() const noexcept { return variant_; }

    std::vector<double> known_poles() const override { return poles_; }

    SpaceVector evaluate(cplx z) const override {
        cvector coef(poles_.size());
        for (index_t j = 0; j < poles_.size(); ++j) {
            const cplx d = poles_[j] - z;
            if (d == cplx{}) throw SolverError("ModalOracle: evaluation exactly at a pole", HUGE_VAL, z);
            coef[j] = (variant_ == ModalVariant::load_driven ? loads_[j] : z * loads_[j]) / d;
        }
        auto out = combine(coef);
        if (lifting_) out += *lifting_;
        return out;
    }

protected:
    SpaceVector compute_taylor(index_t beta) const override {
        const cplx z0 = center();
        cvector coef(poles_.size());
        for (index_t j = 0; j < poles_.size(); ++j) {
            const cplx c = poles_[j] - z0;
            const cplx g = ipow_inv(c, beta + 1);
            if (variant_ == ModalVariant::load_driven) coef[j] = loads_[j] * g;
            else if (beta == 0) coef[j] = z0 * loads_[j] / c;
            else coef[j] = poles_[j] * loads_[j] * g;
        }
        auto out = combine(coef);
        if (beta == 0 && lifting_) out += *lifting_;
        return out;
    }

private:
    SpaceVector combine(const cvector& coef) const {
        if (modes_.empty()) return SpaceVector(space(), coef);
        SpaceVector out(space());
        for (index_t j = 0; j < coef.size(); ++j) out.axpy(coef[j], modes_[j]);
        return out;
    }

    // Integer powers, multiplied out: keeps taylor(b) reproducible bit for bit.
    static cplx ipow_inv(cplx c, index_t k) {
        cplx r = 1.0;
        for (index_t i = 0; i < k; ++i) r /= c;
        return r;
    }

    void validate() const {
        if (poles_.empty()) throw ArgumentError("ModalOracle: no poles");
        if (loads_.size() != poles_.size()) throw ArgumentError("ModalOracle: one load per pole required");
        if (!modes_.empty() && modes_.size() != poles_.size())
            throw ArgumentError("ModalOracle: one mode per pole required");
        for (const auto& m : modes_)
            if (m.space() != space()) throw ArgumentError("ModalOracle: mode from a different space");
        if (lifting_ && lifting_->space() != space()) throw ArgumentError("ModalOracle: lifting from a different space");
        if (lifting_ && variant_ != ModalVariant::lifting_driven)
            throw ArgumentError("ModalOracle: lifting vector given for a load-driven oracle");
        std::vector<double> s = poles_;
        std::sort(s.begin(), s.end());
        for (index_t j = 1; j < s.size(); ++j)
            if (std::abs(s[j] - s[j - 1]) <= 1e-12 * std::max(1.0, std::abs(s[j])))
                throw ArgumentError("ModalOracle: poles must be distinct");
        for (double p : poles_)
            if (std::abs(p - center()) <= 1e-14 * std::max(1.0, std::abs(p))) {
                std::ostringstream msg;
                msg << "ModalOracle: center " << center() << " coincides with pole " << p;
                throw PoleAtCenterError(msg.str());
            }
    }

    void check_orthonormal(const SparseMatrix& m) const {
        for (index_t i = 0; i < modes_.size(); ++i) {
            const cvector mi = m * modes_[i].values();
            for (index_t j = 0; j < modes_.size(); ++j) {
                const cplx g = linalg::dot(modes_[j].values(), mi);
                const double expected = i == j ? 1.0 : 0.0;
                if (std::abs(g - expected) > 1e-10)
                    throw ArgumentError("ModalOracle: modes are not orthonormal (entry " + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
            }
        }
    }

    std::vector<double> poles_;
    std::vector<SpaceVector> modes_;
    cvector loads_;
    ModalVariant variant_;
    std::optional<SpaceVector> lifting_;
};

// Unit-mode oracle over its own spectral space.
inline std::shared_ptr<ModalOracle> make_spectral_oracle(std::vector<double> poles, cvector loads, cplx center,
                                                         double weight,
                                                         ModalVariant variant = ModalVariant::load_driven) {
    auto space = WeightedSpace::spectral(poles, weight);
    return std::make_shared<ModalOracle>(space, center, std::move(poles), std::move(loads), variant);
}

// Dirichlet Laplacian on (0,pi)^2: eigenvalues m^2+n^2 up to a cutoff. Modes
// sharing an eigenvalue are merged into the single direction the load
// excites, so the spectral space stays pole-distinct and norms are exact.
inline std::shared_ptr<ModalOracle> make_dirichlet_square_oracle(
    cplx center, double weight, int cutoff, const std::function<double(int, int)>& load) {
    if (cutoff < 2) throw ArgumentError("make_dirichlet_square_oracle: cutoff must be at least 2");
    std::map<int, double> energy;  // eigenvalue -> sum of squared loads
    for (int m = 1; m * m < cutoff; ++m)
        for (int n = 1; m * m + n * n <= cutoff; ++n) {
            const double f = load(m, n);
            energy[m * m + n * n] += f * f;
        }
    std::vector<double> poles;
    cvector loads;
    for (const auto& [lam, e] : energy) {
        if (e == 0.0) continue;
        poles.push_back(lam);
        loads.emplace_back(std::sqrt(e));
    }
    return make_spectral_oracle(std::move(poles), std::move(loads), center, weight);
}

// Sine coefficients of f(x, y) = x y against (2/pi) sin(mx) sin(ny).
inline double xy_load_coefficient(int m, int n) {
    const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * pi * sign / (static_cast<double>(m) * static_cast<double>(n));
}

}  // namespace pademor::maps
