#pragma once

#include "ashll/errors.hpp"
#include "ashll/gas_state.hpp"
#include "ashll/field.hpp"
#include "ashll/mesh.hpp"
#include "ashll/riemann_core.hpp"
#include "ashll/allspeed.hpp"
#include "ashll/reconstruction.hpp"
#include "ashll/parallel.hpp"
#include "ashll/solver.hpp"
#include "ashll/oracles.hpp"
#include "ashll/io.hpp"
#include "ashll/cases.hpp"
