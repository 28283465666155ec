#pragma once

#include "nematic/barriers.hpp"
#include "nematic/blowup.hpp"
#include "nematic/config.hpp"
#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/fields3d.hpp"
#include "nematic/flow_solver.hpp"
#include "nematic/hopf.hpp"
#include "nematic/mms.hpp"
#include "nematic/quadrature.hpp"
#include "nematic/radial_grid.hpp"
#include "nematic/scenarios.hpp"
#include "nematic/tridiagonal.hpp"
#include "nematic/verify.hpp"
