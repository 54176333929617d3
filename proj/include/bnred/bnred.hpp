#pragma once

// Boolean-network attractor identification with variable elimination.

#include "bnet.hpp"
#include "bool_expr.hpp"
#include "decision_diagram.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "reduction.hpp"
#include "state.hpp"
#include "trap_spaces.hpp"
