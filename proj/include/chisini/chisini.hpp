#pragma once

// Umbrella header for the equalizer-equation toolkit: domain geometry and
// function handles, one-variable monotone analysis, level-set metrics, the
// solvers, and the verification suite.

#include "chisini/catalog.hpp"
#include "chisini/format.hpp"
#include "chisini/function.hpp"
#include "chisini/grid_function.hpp"
#include "chisini/idempotency.hpp"
#include "chisini/interval.hpp"
#include "chisini/level_data.hpp"
#include "chisini/level_interval.hpp"
#include "chisini/quasi_inverse.hpp"
#include "chisini/solver.hpp"
#include "chisini/verify.hpp"
