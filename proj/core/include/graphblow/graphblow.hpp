#pragma once

#include "graphblow/bounds.hpp"
#include "graphblow/domain.hpp"
#include "graphblow/errors.hpp"
#include "graphblow/evolution.hpp"
#include "graphblow/graph.hpp"
#include "graphblow/heat_kernel.hpp"
#include "graphblow/json_io.hpp"
#include "graphblow/operators.hpp"
#include "graphblow/spectral.hpp"
#include "graphblow/version.hpp"
#include "graphblow/vertex_function.hpp"
