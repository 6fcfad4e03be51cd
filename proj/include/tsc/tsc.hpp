#pragma once

#include "tsc/datamodel.hpp"
#include "tsc/experiment.hpp"
#include "tsc/io.hpp"
#include "tsc/metrics.hpp"
#include "tsc/outlier.hpp"
#include "tsc/spectral.hpp"
#include "tsc/synthgen.hpp"
#include "tsc/tsc_core.hpp"
