#pragma once

#include "coefficient_vector.hpp"
#include "errors.hpp"
#include "evaluator.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "real.hpp"
#include "relations.hpp"
