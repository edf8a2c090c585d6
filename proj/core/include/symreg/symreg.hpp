#pragma once

#include "symreg/diagnostics.hpp"
#include "symreg/error.hpp"
#include "symreg/linalg.hpp"
#include "symreg/matrix.hpp"
#include "symreg/norms.hpp"
#include "symreg/optimize.hpp"
#include "symreg/orlicz.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/random.hpp"
#include "symreg/sketch.hpp"
#include "symreg/symnorm_regression.hpp"
