#pragma once

#include "benchmark/functions.hpp"
#include "benchmark/problem.hpp"
#include "config.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "random.hpp"
#include "roles.hpp"
#include "stats.hpp"
#include "swarm.hpp"
