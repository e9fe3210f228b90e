/**
 * @file focsim.hpp
 * @brief Everything: Jones primitives, sensor elements, spun media,
 *        experiments and I/O.
 */

#pragma once

#include "constants.hpp"
#include "elements.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "io/config.hpp"
#include "io/reports.hpp"
#include "io/table.hpp"
#include "jones.hpp"
#include "spun.hpp"
