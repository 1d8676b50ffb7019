#pragma once

// Umbrella header.

#include "helpcalc/complex_mat2.hpp"
#include "helpcalc/errors.hpp"
#include "helpcalc/expr.hpp"
#include "helpcalc/laurent.hpp"
#include "helpcalc/odeint.hpp"
#include "helpcalc/problem.hpp"
#include "helpcalc/report.hpp"
#include "helpcalc/riccati.hpp"
#include "helpcalc/spectral.hpp"
#include "helpcalc/taylor.hpp"
#include "helpcalc/vandermonde.hpp"
