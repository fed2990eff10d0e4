#pragma once

// Eigenvalue location for graphs given by slick clique-width expressions:
// congruence diagonalization of M - cI in O(k^3 n) exact rational
// operations, expression translations, and a dense oracle for verification.

#include "eigloc/engine.hpp"
#include "eigloc/eval.hpp"
#include "eigloc/expr.hpp"
#include "eigloc/gen.hpp"
#include "eigloc/graph.hpp"
#include "eigloc/io.hpp"
#include "eigloc/oracle.hpp"
#include "eigloc/rational.hpp"
#include "eigloc/spectral.hpp"
#include "eigloc/translate.hpp"
