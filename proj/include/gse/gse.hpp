#pragma once

#include "bounds.hpp"
#include "config.hpp"
#include "continuum_op.hpp"
#include "cube_fourier.hpp"
#include "discrete_op.hpp"
#include "eigensolve.hpp"
#include "lattice.hpp"
#include "multilinear.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "transfer.hpp"
