#pragma once

#include "concbound/bounds.hpp"
#include "concbound/chebyshev.hpp"
#include "concbound/combinatorics.hpp"
#include "concbound/config.hpp"
#include "concbound/ensemble.hpp"
#include "concbound/errors.hpp"
#include "concbound/format.hpp"
#include "concbound/gamma.hpp"
#include "concbound/quadrature.hpp"
#include "concbound/rng.hpp"
#include "concbound/runner.hpp"
#include "concbound/simulate.hpp"
#include "concbound/types.hpp"
#include "concbound/verify.hpp"
