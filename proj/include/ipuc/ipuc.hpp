#pragma once

#include "audit.hpp"
#include "decide.hpp"
#include "deduction.hpp"
#include "derivation_io.hpp"
#include "error.hpp"
#include "lewis.hpp"
#include "model_io.hpp"
#include "normalize.hpp"
#include "parser.hpp"
#include "semantics.hpp"
#include "syntax.hpp"
