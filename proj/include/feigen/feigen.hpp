#ifndef FEIGEN_FEIGEN_HPP
#define FEIGEN_FEIGEN_HPP

#include "errors.hpp"
#include "real.hpp"
#include "interval.hpp"
#include "function_ball.hpp"
#include "renorm_ops.hpp"
#include "parallel.hpp"
#include "dense.hpp"
#include "approx.hpp"
#include "certifier.hpp"
#include "reporting.hpp"

#endif // FEIGEN_FEIGEN_HPP
