#pragma once

#include "citeflow/error.hpp"
#include "citeflow/random.hpp"
#include "citeflow/field.hpp"
#include "citeflow/weighted.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/csv.hpp"
#include "citeflow/corpus.hpp"
#include "citeflow/stats.hpp"
#include "citeflow/tbs.hpp"
#include "citeflow/pools.hpp"
#include "citeflow/models.hpp"
#include "citeflow/simulation.hpp"
#include "citeflow/synthetic.hpp"
#include "citeflow/config.hpp"
#include "citeflow/graph_io.hpp"
#include "citeflow/cli.hpp"
