#pragma once

#include "npd/coherence.hpp"
#include "npd/dictionary.hpp"
#include "npd/errors.hpp"
#include "npd/guarantees.hpp"
#include "npd/harness.hpp"
#include "npd/numtheory.hpp"
#include "npd/recovery.hpp"
#include "npd/rng.hpp"
#include "npd/support.hpp"
#include "npd/svg.hpp"
