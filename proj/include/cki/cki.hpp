#pragma once

#include "cki/binomial.hpp"
#include "cki/cardinal.hpp"
#include "cki/error.hpp"
#include "cki/evaluation.hpp"
#include "cki/grid.hpp"
#include "cki/kernel.hpp"
#include "cki/oracle.hpp"
#include "cki/polynomial.hpp"
#include "cki/precision.hpp"
#include "cki/routes.hpp"
#include "cki/spectral.hpp"
