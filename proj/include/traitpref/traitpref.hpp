#pragma once

#include "traitpref/matrix.hpp"
#include "traitpref/core.hpp"
#include "traitpref/inference.hpp"
#include "traitpref/solver.hpp"
#include "traitpref/simulate.hpp"
#include "traitpref/stats.hpp"
#include "traitpref/io.hpp"
#include "traitpref/fifa.hpp"
#include "traitpref/experiments.hpp"
#include "traitpref/manifest.hpp"
