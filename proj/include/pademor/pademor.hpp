#pragma once

#include "pademor/core/errors.hpp"
#include "pademor/core/parallel.hpp"
#include "pademor/core/types.hpp"
#include "pademor/experiment/config.hpp"
#include "pademor/experiment/csv.hpp"
#include "pademor/experiment/presets.hpp"
#include "pademor/experiment/runner.hpp"
#include "pademor/experiment/studies.hpp"
#include "pademor/experiment/svg.hpp"
#include "pademor/fd/grid.hpp"
#include "pademor/linalg/banded_lu.hpp"
#include "pademor/linalg/bicgstab.hpp"
#include "pademor/linalg/cholesky.hpp"
#include "pademor/linalg/hermitian.hpp"
#include "pademor/linalg/polynomial.hpp"
#include "pademor/linalg/shifted_solve.hpp"
#include "pademor/linalg/sparse_matrix.hpp"
#include "pademor/linalg/subspace_eigen.hpp"
#include "pademor/linalg/svd.hpp"
#include "pademor/maps/helmholtz_map.hpp"
#include "pademor/maps/modal_oracle.hpp"
#include "pademor/maps/response_map.hpp"
#include "pademor/maps/scattering.hpp"
#include "pademor/maps/transmission.hpp"
#include "pademor/pade/lspade.hpp"
#include "pademor/pade/serialization.hpp"
#include "pademor/space/weighted_space.hpp"
#include "pademor/stochastic/rng.hpp"
#include "pademor/stochastic/sampling.hpp"
