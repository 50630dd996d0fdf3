#pragma once

#include "geobundle/bundle.hpp"
#include "geobundle/curvature.hpp"
#include "geobundle/errors.hpp"
#include "geobundle/kind.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/objectives/common.hpp"
#include "geobundle/objectives/median.hpp"
#include "geobundle/objectives/procrustes.hpp"
#include "geobundle/objectives/tv.hpp"
#include "geobundle/problem.hpp"
#include "geobundle/qp.hpp"
#include "geobundle/solver.hpp"
