#pragma once

#include "kcollapse/baselines.hpp"
#include "kcollapse/collapse.hpp"
#include "kcollapse/cores.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/eval.hpp"
#include "kcollapse/graph.hpp"
#include "kcollapse/impact.hpp"
#include "kcollapse/metrics.hpp"
#include "kcollapse/oracle.hpp"
#include "kcollapse/solvers.hpp"
