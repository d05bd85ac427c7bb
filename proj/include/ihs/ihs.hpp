#pragma once

#include "ihs/bench.hpp"
#include "ihs/brute_force.hpp"
#include "ihs/core_improve.hpp"
#include "ihs/csp_oracle.hpp"
#include "ihs/generators.hpp"
#include "ihs/hitting.hpp"
#include "ihs/ihs_solver.hpp"
#include "ihs/level_space.hpp"
#include "ihs/merge.hpp"
#include "ihs/model.hpp"
#include "ihs/random.hpp"
#include "ihs/sat/dimacs.hpp"
#include "ihs/sat/solver.hpp"
#include "ihs/types.hpp"
#include "ihs/wcsp_format.hpp"
