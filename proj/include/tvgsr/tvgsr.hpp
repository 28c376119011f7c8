#pragma once

#include "tvgsr/error.hpp"
#include "tvgsr/random.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/temporal.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/solvers.hpp"
#include "tvgsr/spectral_analysis.hpp"
#include "tvgsr/io.hpp"
#include "tvgsr/data.hpp"
#include "tvgsr/evaluation.hpp"
