#pragma once

#include "spike_regions/arrangement2d.hpp"
#include "spike_regions/constructors.hpp"
#include "spike_regions/counting.hpp"
#include "spike_regions/error_measures.hpp"
#include "spike_regions/errors.hpp"
#include "spike_regions/io.hpp"
#include "spike_regions/matrix.hpp"
#include "spike_regions/network.hpp"
#include "spike_regions/random.hpp"
#include "spike_regions/regions.hpp"
#include "spike_regions/scalar.hpp"
#include "spike_regions/simulate.hpp"
#include "spike_regions/temporal_partition.hpp"
#include "spike_regions/unroll.hpp"
