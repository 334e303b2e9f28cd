#pragma once

#include "ball.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "hproduct.hpp"
#include "jet.hpp"
#include "kappa.hpp"
#include "parallel.hpp"
#include "primetools.hpp"
#include "quad.hpp"
#include "sievesums.hpp"
#include "taylor.hpp"
#include "zetafn.hpp"
