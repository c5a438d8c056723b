#pragma once

#include "analytic.hpp"
#include "cloud.hpp"
#include "config.hpp"
#include "disjoint_set.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "philox.hpp"
#include "report.hpp"
#include "validation.hpp"
