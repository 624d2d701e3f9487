#pragma once

#include "maassden/arith.hpp"
#include "maassden/core.hpp"
#include "maassden/density.hpp"
#include "maassden/expsum.hpp"
#include "maassden/io.hpp"
#include "maassden/kuznetsov.hpp"
#include "maassden/quadrature.hpp"
#include "maassden/records.hpp"
#include "maassden/rmt.hpp"
#include "maassden/specfun.hpp"
#include "maassden/tasks.hpp"
#include "maassden/testfn.hpp"
#include "maassden/weights.hpp"
