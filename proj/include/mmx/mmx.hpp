#pragma once

#include "mmx/certify.hpp"
#include "mmx/chebyshev.hpp"
#include "mmx/io.hpp"
#include "mmx/problems.hpp"
#include "mmx/rng.hpp"
#include "mmx/schedules.hpp"
#include "mmx/solvers.hpp"
#include "mmx/types.hpp"
