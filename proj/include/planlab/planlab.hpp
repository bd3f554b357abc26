#pragma once
// Umbrella header.

#include "planlab/adapt.hpp"
#include "planlab/commands.hpp"
#include "planlab/config.hpp"
#include "planlab/csv.hpp"
#include "planlab/distance.hpp"
#include "planlab/env.hpp"
#include "planlab/maps.hpp"
#include "planlab/plangraph.hpp"
#include "planlab/rng.hpp"
#include "planlab/rollout.hpp"
#include "planlab/svg.hpp"
