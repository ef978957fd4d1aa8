#pragma once

#include "mtr/types.hpp"
#include "mtr/network.hpp"
#include "mtr/trips.hpp"
#include "mtr/hypergraph.hpp"
#include "mtr/feasibility.hpp"
#include "mtr/lp.hpp"
#include "mtr/solvers.hpp"
#include "mtr/setpacking.hpp"
#include "mtr/oracle.hpp"
#include "mtr/sim.hpp"
