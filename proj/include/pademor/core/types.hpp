#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pademor {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;
using index_t = std::size_t;

inline constexpr double pi = 3.14159265358979323846;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

}  // namespace pademor
