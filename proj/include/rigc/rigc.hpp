#pragma once

#include "rigc/error.hpp"
#include "rigc/random.hpp"
#include "rigc/pmf.hpp"
#include "rigc/canonical.hpp"
#include "rigc/community.hpp"
#include "rigc/params.hpp"
#include "rigc/bcm.hpp"
#include "rigc/projection.hpp"
#include "rigc/stats.hpp"
#include "rigc/census.hpp"
#include "rigc/limits.hpp"
#include "rigc/enumerate.hpp"
#include "rigc/convergence.hpp"
#include "rigc/config.hpp"
