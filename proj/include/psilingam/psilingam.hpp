#pragma once

#include "psilingam/data_matrix.hpp"
#include "psilingam/gaussianize.hpp"
#include "psilingam/graph.hpp"
#include "psilingam/graph_io.hpp"
#include "psilingam/groupdiff.hpp"
#include "psilingam/lingam.hpp"
#include "psilingam/metrics.hpp"
#include "psilingam/netstats.hpp"
#include "psilingam/prior.hpp"
#include "psilingam/rng.hpp"
#include "psilingam/simbench.hpp"
#include "psilingam/stats.hpp"
