#pragma once

#include "potts_af/analytic_bounds.hpp"
#include "potts_af/cascade.hpp"
#include "potts_af/disorder.hpp"
#include "potts_af/errors.hpp"
#include "potts_af/ext_real.hpp"
#include "potts_af/model_core.hpp"
#include "potts_af/numeric.hpp"
#include "potts_af/parallel.hpp"
#include "potts_af/replica_symmetric.hpp"
#include "potts_af/rng.hpp"
#include "potts_af/second_moment.hpp"
