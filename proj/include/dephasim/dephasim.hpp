#pragma once

#include "dephasim/analysis.hpp"
#include "dephasim/angle.hpp"
#include "dephasim/config.hpp"
#include "dephasim/csv.hpp"
#include "dephasim/density_matrix.hpp"
#include "dephasim/distribution.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/exact.hpp"
#include "dephasim/kernel.hpp"
#include "dephasim/monte_carlo.hpp"
#include "dephasim/process.hpp"
#include "dephasim/rng.hpp"
#include "dephasim/runner.hpp"
#include "dephasim/serialization.hpp"
#include "dephasim/trace.hpp"
