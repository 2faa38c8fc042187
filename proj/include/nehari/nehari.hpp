#pragma once

#include "nehari/affine.hpp"
#include "nehari/config.hpp"
#include "nehari/fibering.hpp"
#include "nehari/grid.hpp"
#include "nehari/io.hpp"
#include "nehari/models.hpp"
#include "nehari/nonlinearity.hpp"
#include "nehari/runner.hpp"
#include "nehari/solver.hpp"
#include "nehari/validate.hpp"
