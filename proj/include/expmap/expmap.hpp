#pragma once

// Umbrella header.

#include "expmap/commands.hpp"
#include "expmap/error.hpp"
#include "expmap/evaluator.hpp"
#include "expmap/geometry.hpp"
#include "expmap/jet.hpp"
#include "expmap/manifold.hpp"
#include "expmap/oracle.hpp"
#include "expmap/series.hpp"
#include "expmap/tensor.hpp"
#include "expmap/zoo.hpp"
