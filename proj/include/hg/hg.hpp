#ifndef HG_HG_HPP
#define HG_HG_HPP

#include "hg/experiments.hpp"
#include "hg/grid.hpp"
#include "hg/group.hpp"
#include "hg/kernels.hpp"
#include "hg/numerics.hpp"
#include "hg/quadrature.hpp"
#include "hg/reduce.hpp"
#include "hg/report.hpp"
#include "hg/rng.hpp"
#include "hg/test_function.hpp"
#include "hg/verify.hpp"

#endif
