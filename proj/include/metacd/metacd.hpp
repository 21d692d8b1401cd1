#pragma once

#include "metacd/cusa.hpp"
#include "metacd/graph.hpp"
#include "metacd/io.hpp"
#include "metacd/louvain.hpp"
#include "metacd/metrics.hpp"
#include "metacd/modularity.hpp"
#include "metacd/rng.hpp"
#include "metacd/scoring.hpp"
#include "metacd/synthesis.hpp"
