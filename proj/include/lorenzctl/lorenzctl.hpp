#pragma once

#include "chaos.hpp"
#include "equilibria.hpp"
#include "error.hpp"
#include "integrator.hpp"
#include "io.hpp"
#include "lyapunov.hpp"
#include "model.hpp"
#include "orbits.hpp"
#include "sweep.hpp"
