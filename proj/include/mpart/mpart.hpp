#pragma once

#include "mpart/error.hpp"
#include "mpart/geometry.hpp"
#include "mpart/manifold.hpp"
#include "mpart/masses.hpp"
#include "mpart/plot.hpp"
#include "mpart/projective.hpp"
#include "mpart/region_types.hpp"
#include "mpart/regions.hpp"
#include "mpart/serialize.hpp"
#include "mpart/solvers.hpp"
#include "mpart/testmaps.hpp"
#include "mpart/topology.hpp"
