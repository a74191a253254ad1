#pragma once

#include "blfctl/attitude.hpp"
#include "blfctl/cli.hpp"
#include "blfctl/config.hpp"
#include "blfctl/csv.hpp"
#include "blfctl/el_blf.hpp"
#include "blfctl/errors.hpp"
#include "blfctl/math.hpp"
#include "blfctl/metrics.hpp"
#include "blfctl/plants.hpp"
#include "blfctl/quad_blf.hpp"
#include "blfctl/reference.hpp"
#include "blfctl/robust.hpp"
#include "blfctl/scenarios.hpp"
#include "blfctl/sim.hpp"
#include "blfctl/smc.hpp"
