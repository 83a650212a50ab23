#pragma once

// Umbrella header for the scaling-atlas toolkit.

#include "scaling_atlas/chunk_sampler.hpp"
#include "scaling_atlas/errors.hpp"
#include "scaling_atlas/fit.hpp"
#include "scaling_atlas/json_io.hpp"
#include "scaling_atlas/nelder_mead.hpp"
#include "scaling_atlas/observations.hpp"
#include "scaling_atlas/projection.hpp"
#include "scaling_atlas/rng.hpp"
#include "scaling_atlas/scaling_models.hpp"
#include "scaling_atlas/svg_plot.hpp"
#include "scaling_atlas/vit_arch.hpp"
