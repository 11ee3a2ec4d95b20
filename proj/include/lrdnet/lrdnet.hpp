#pragma once

#include "lrdnet/erramilli.hpp"
#include "lrdnet/errors.hpp"
#include "lrdnet/experiment.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/graph.hpp"
#include "lrdnet/load.hpp"
#include "lrdnet/random.hpp"
#include "lrdnet/simulation.hpp"
#include "lrdnet/static_model.hpp"
