#pragma once

#include "frenkel/errors.hpp"
#include "frenkel/linalg.hpp"
#include "frenkel/frechet.hpp"
#include "frenkel/divergence.hpp"
#include "frenkel/pencil.hpp"
#include "frenkel/quadrature.hpp"
#include "frenkel/integral_forms.hpp"
#include "frenkel/resolvent.hpp"
#include "frenkel/random.hpp"
#include "frenkel/truncation.hpp"
#include "frenkel/matrix_io.hpp"
#include "frenkel/suite.hpp"
