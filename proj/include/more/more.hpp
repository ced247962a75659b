#pragma once

// Umbrella header: the whole library.

#include "distribution.hpp"  // IWYU pragma: export
#include "engine.hpp"        // IWYU pragma: export
#include "conversion.hpp"    // IWYU pragma: export
#include "prediction.hpp"    // IWYU pragma: export
#include "backtest.hpp"      // IWYU pragma: export
#include "experiment.hpp"    // IWYU pragma: export
#include "synth.hpp"         // IWYU pragma: export
#include "io.hpp"            // IWYU pragma: export
#include "rng.hpp"           // IWYU pragma: export
