#pragma once

#include "rrobust/digraph.hpp"
#include "rrobust/estimation.hpp"
#include "rrobust/exact.hpp"
#include "rrobust/generators.hpp"
#include "rrobust/partition.hpp"
#include "rrobust/rng.hpp"
#include "rrobust/sampling.hpp"
#include "rrobust/tester.hpp"
