#pragma once

#include "lvse/analytic.hpp"
#include "lvse/domain.hpp"
#include "lvse/eigensolve.hpp"
#include "lvse/errors.hpp"
#include "lvse/io.hpp"
#include "lvse/observables.hpp"
#include "lvse/operators.hpp"
#include "lvse/report.hpp"
#include "lvse/scenario.hpp"
#include "lvse/verify.hpp"
