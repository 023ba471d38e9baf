#pragma once

// Umbrella header: bias-corrected estimation and imputation for
// positive-valued data reported through a logistic selection mechanism.

#include "explogi/csv.hpp"
#include "explogi/data.hpp"
#include "explogi/diagnostics.hpp"
#include "explogi/distributions.hpp"
#include "explogi/errors.hpp"
#include "explogi/imputation.hpp"
#include "explogi/inference.hpp"
#include "explogi/optim.hpp"
#include "explogi/quadrature.hpp"
#include "explogi/rng.hpp"
#include "explogi/stats.hpp"
