#pragma once

// Spectral data, solvents, and right-factor atlases for regular complex
// matrix polynomials.

#include "matpoly/error.hpp"
#include "matpoly/linalg.hpp"
#include "matpoly/roots.hpp"
#include "matpoly/matrix_polynomial.hpp"
#include "matpoly/spectral.hpp"
#include "matpoly/linearize.hpp"
#include "matpoly/solvents.hpp"
#include "matpoly/factor.hpp"
#include "matpoly/oracle.hpp"
