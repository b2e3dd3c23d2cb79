#pragma once

// Umbrella header: the whole library is header-only.

#include "smr/corpus.hpp"     // IWYU pragma: export
#include "smr/csv.hpp"        // IWYU pragma: export
#include "smr/lexicon.hpp"    // IWYU pragma: export
#include "smr/metrics.hpp"    // IWYU pragma: export
#include "smr/neural.hpp"     // IWYU pragma: export
#include "smr/pipeline.hpp"   // IWYU pragma: export
#include "smr/rng.hpp"        // IWYU pragma: export
#include "smr/textprep.hpp"   // IWYU pragma: export
