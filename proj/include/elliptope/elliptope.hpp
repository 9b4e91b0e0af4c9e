#pragma once

// Umbrella header: uniform sampling of correlation matrices via
// Metropolis-Hastings on the upper Cholesky factor, baseline samplers,
// and the statistical verification toolkit.

#include "elliptope/analysis.hpp"
#include "elliptope/baselines.hpp"
#include "elliptope/diagnostics.hpp"
#include "elliptope/io.hpp"
#include "elliptope/matrix.hpp"
#include "elliptope/matrix_sampler.hpp"
#include "elliptope/rng.hpp"
#include "elliptope/row_chain.hpp"
#include "elliptope/special_functions.hpp"
#include "elliptope/stats.hpp"
