#pragma once

#include "fsf/bottleneck.hpp"
#include "fsf/classify.hpp"
#include "fsf/dfs_code.hpp"
#include "fsf/embedding.hpp"
#include "fsf/errors.hpp"
#include "fsf/features.hpp"
#include "fsf/filtration.hpp"
#include "fsf/graph.hpp"
#include "fsf/miner.hpp"
#include "fsf/parallel.hpp"
#include "fsf/persistence.hpp"
#include "fsf/perturb.hpp"
#include "fsf/random.hpp"
#include "fsf/robustness.hpp"
#include "fsf/tudataset.hpp"
