#pragma once

#include "hcpforge/bench.hpp"
#include "hcpforge/cnf.hpp"
#include "hcpforge/error.hpp"
#include "hcpforge/external.hpp"
#include "hcpforge/families.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/hardener.hpp"
#include "hcpforge/reducer.hpp"
#include "hcpforge/rng.hpp"
#include "hcpforge/solver.hpp"
#include "hcpforge/tsplib.hpp"
