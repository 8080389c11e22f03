#pragma once

#include "wlocc/bounds.hpp"
#include "wlocc/error.hpp"
#include "wlocc/linalg.hpp"
#include "wlocc/measurement.hpp"
#include "wlocc/oracle.hpp"
#include "wlocc/plan.hpp"
#include "wlocc/protocol.hpp"
#include "wlocc/state.hpp"
#include "wlocc/symmetric.hpp"
