#pragma once

#include "sumctl/backend.hpp"
#include "sumctl/corpus.hpp"
#include "sumctl/error.hpp"
#include "sumctl/experiment.hpp"
#include "sumctl/metrics.hpp"
#include "sumctl/optimizer.hpp"
#include "sumctl/prompt.hpp"
#include "sumctl/semgraph.hpp"
#include "sumctl/textproc.hpp"
