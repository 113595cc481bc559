#pragma once

// Umbrella header.

#include <qhm/algebraic.hpp>
#include <qhm/bimodule.hpp>
#include <qhm/cf.hpp>
#include <qhm/classify.hpp>
#include <qhm/factor.hpp>
#include <qhm/field.hpp>
#include <qhm/integer.hpp>
#include <qhm/json.hpp>
#include <qhm/lattice.hpp>
#include <qhm/linalg.hpp>
#include <qhm/parse.hpp>
#include <qhm/polynomial.hpp>
