#pragma once

#include "mppf/environment.hpp"
#include "mppf/escape.hpp"
#include "mppf/geometry.hpp"
#include "mppf/output.hpp"
#include "mppf/potentials.hpp"
#include "mppf/sawtooth.hpp"
#include "mppf/scenario.hpp"
#include "mppf/simulation.hpp"
