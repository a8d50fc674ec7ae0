#pragma once

// Umbrella header: the whole library in one include.

#include "model.hpp"      // entities, dependency sets, validation
#include "facts.hpp"      // facts-file load/save
#include "generate.hpp"   // reproducible synthetic systems
#include "metrics.hpp"    // sequential metrics engine
#include "parallel.hpp"   // multi-threaded metrics engine
#include "suggest.hpp"    // move-method suggestions and what-if scoring
#include "report_io.hpp"  // canonical report rendering
