#pragma once

// Umbrella header for the full public API.

#include "alaam/attributes.hpp"
#include "alaam/csv.hpp"
#include "alaam/deviance.hpp"
#include "alaam/errors.hpp"
#include "alaam/evidence.hpp"
#include "alaam/exchange.hpp"
#include "alaam/gof.hpp"
#include "alaam/graph.hpp"
#include "alaam/io.hpp"
#include "alaam/logistic.hpp"
#include "alaam/mechanism.hpp"
#include "alaam/mnar.hpp"
#include "alaam/model.hpp"
#include "alaam/path_sampler.hpp"
#include "alaam/prior.hpp"
#include "alaam/rng.hpp"
#include "alaam/run_config.hpp"
#include "alaam/simulator.hpp"
#include "alaam/statistics.hpp"
#include "alaam/summary.hpp"
#include "alaam/version.hpp"
