// Umbrella header.
#pragma once

#include "ordf/clouds.hpp"
#include "ordf/config.hpp"
#include "ordf/core.hpp"
#include "ordf/ecology.hpp"
#include "ordf/grid.hpp"
#include "ordf/io.hpp"
#include "ordf/metrics.hpp"
#include "ordf/network.hpp"
#include "ordf/observer.hpp"
#include "ordf/presets.hpp"
#include "ordf/sensing.hpp"
