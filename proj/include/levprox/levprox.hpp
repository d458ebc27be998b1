// Umbrella header.
#pragma once

#include "levprox/core.hpp"
#include "levprox/json_io.hpp"
#include "levprox/catalog.hpp"
#include "levprox/prox_engine.hpp"
#include "levprox/subdiff.hpp"
#include "levprox/resolvent.hpp"
#include "levprox/properties.hpp"
#include "levprox/dsl.hpp"
#include "levprox/figures.hpp"
#include "levprox/suites.hpp"
