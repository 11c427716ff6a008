#ifndef TDNET_TDNET_HPP
#define TDNET_TDNET_HPP

#include "tdnet/coupling.hpp"
#include "tdnet/divergence.hpp"
#include "tdnet/errors.hpp"
#include "tdnet/experiment.hpp"
#include "tdnet/expr.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"
#include "tdnet/planner.hpp"
#include "tdnet/rng.hpp"
#include "tdnet/routing.hpp"
#include "tdnet/simplex.hpp"
#include "tdnet/throughput.hpp"
#include "tdnet/topology.hpp"

#endif
