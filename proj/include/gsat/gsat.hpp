#pragma once

#include "gsat/cnf.hpp"
#include "gsat/dataset.hpp"
#include "gsat/dimacs.hpp"
#include "gsat/dpll.hpp"
#include "gsat/errors.hpp"
#include "gsat/experiment.hpp"
#include "gsat/generators.hpp"
#include "gsat/local_search.hpp"
#include "gsat/rng.hpp"
