#pragma once

#include <deque>
#include <mutex>
#include <vector>

#include "pademor/core/errors.hpp"
#include "pademor/space/weighted_space.hpp"

namespace pademor::maps {

// z -> S(z) with Taylor coefficients at a fixed center. Coefficients are
// cached; order b is produced after b-1 (and b-2), under a lock.
class ResponseMap {
public:
    ResponseMap(SpacePtr space, cplx center) : space_(std::move(space)), center_(center) {
        if (!space_) throw ArgumentError("ResponseMap: null space");
        if (!(center_.real() > 0.0)) throw ArgumentError("ResponseMap: center must have positive real part");
    }
    virtual ~ResponseMap() = default;
    ResponseMap(const ResponseMap&) = delete;
    ResponseMap& operator=(const ResponseMap&) = delete;

    cplx center() const noexcept { return center_; }
    const SpacePtr& space() const noexcept { return space_; }

    const SpaceVector& taylor(index_t beta) const {
        std::lock_guard<std::mutex> lock(mutex_);
        while (cache_.size() <= beta) cache_.push_back(compute_taylor(cache_.size()));
        return cache_[beta];
    }

    std::vector<SpaceVector> taylor_range(index_t last) const {
        std::vector<SpaceVector> out;
        out.reserve(last + 1);
        for (index_t b = 0; b <= last; ++b) out.push_back(taylor(b));
        return out;
    }

    virtual SpaceVector evaluate(cplx z) const = 0;

    // Poles known in closed form (empty if none are).
    virtual std::vector<double> known_poles() const { return {}; }

protected:
    // Called with the lock held; cached(b) is valid for every b below beta.
    virtual SpaceVector compute_taylor(index_t beta) const = 0;
    const SpaceVector& cached(index_t beta) const { return cache_[beta]; }
    SpaceVector zero() const { return SpaceVector(space_); }

private:
    SpacePtr space_;
    cplx center_;
    mutable std::mutex mutex_;
    mutable std::deque<SpaceVector> cache_;
};

}  // namespace pademor::maps
