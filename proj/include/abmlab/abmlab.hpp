#pragma once

// Umbrella header for the annihilating/coalescing Brownian particle lab.

#include "abmlab/brownian.hpp"
#include "abmlab/density.hpp"
#include "abmlab/density_profile.hpp"
#include "abmlab/discrete_config.hpp"
#include "abmlab/domain.hpp"
#include "abmlab/duality.hpp"
#include "abmlab/entrance.hpp"
#include "abmlab/errors.hpp"
#include "abmlab/estimate.hpp"
#include "abmlab/io.hpp"
#include "abmlab/manifest.hpp"
#include "abmlab/parallel.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/quadrature.hpp"
#include "abmlab/rng.hpp"
#include "abmlab/stats.hpp"
#include "abmlab/svg.hpp"
#include "abmlab/test_function.hpp"
#include "abmlab/version.hpp"
#include "abmlab/voter.hpp"
