#pragma once
// Umbrella header.

#include "geoflow/central.hpp"
#include "geoflow/cli.hpp"
#include "geoflow/config.hpp"
#include "geoflow/curvature.hpp"
#include "geoflow/diffeo.hpp"
#include "geoflow/error.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/grid.hpp"
#include "geoflow/jacobi.hpp"
#include "geoflow/metrics.hpp"
#include "geoflow/random.hpp"
#include "geoflow/vanish.hpp"
#include "geoflow/verify.hpp"
