#pragma once

#include "hlg/errors.hpp"
#include "hlg/special_fn.hpp"
#include "hlg/quadrature.hpp"
#include "hlg/numdiff.hpp"
#include "hlg/random.hpp"
#include "hlg/hlg_dist.hpp"
#include "hlg/gos.hpp"
#include "hlg/moments.hpp"
#include "hlg/bayes.hpp"
#include "hlg/fit.hpp"
#include "hlg/sim.hpp"
