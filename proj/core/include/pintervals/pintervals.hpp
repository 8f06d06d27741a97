#pragma once

#include "pintervals/bccp.hpp"
#include "pintervals/bootstrap.hpp"
#include "pintervals/conformal.hpp"
#include "pintervals/distance.hpp"
#include "pintervals/error.hpp"
#include "pintervals/evaluation.hpp"
#include "pintervals/grouped.hpp"
#include "pintervals/parametric.hpp"
#include "pintervals/quantile.hpp"
#include "pintervals/rng.hpp"
#include "pintervals/score.hpp"
#include "pintervals/table.hpp"
#include "pintervals/types.hpp"
