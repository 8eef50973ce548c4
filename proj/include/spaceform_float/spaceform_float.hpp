#pragma once

#include "spaceform_float/errors.hpp"
#include "spaceform_float/spaceform.hpp"
#include "spaceform_float/quadrature.hpp"
#include "spaceform_float/direction_grid.hpp"
#include "spaceform_float/section.hpp"
#include "spaceform_float/boundary.hpp"
#include "spaceform_float/ellipsoid.hpp"
#include "spaceform_float/polytope.hpp"
#include "spaceform_float/smooth2d.hpp"
#include "spaceform_float/clipped.hpp"
#include "spaceform_float/body.hpp"
#include "spaceform_float/wulff.hpp"
#include "spaceform_float/parallel.hpp"
#include "spaceform_float/capvolume.hpp"
#include "spaceform_float/floatarea.hpp"
#include "spaceform_float/experiments.hpp"
#include "spaceform_float/spec_io.hpp"
