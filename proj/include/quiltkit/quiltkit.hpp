#pragma once

#include "quiltkit/engine.hpp"
#include "quiltkit/graded.hpp"
#include "quiltkit/json_io.hpp"
#include "quiltkit/maslov.hpp"
#include "quiltkit/matrix.hpp"
#include "quiltkit/quilt.hpp"
#include "quiltkit/rational.hpp"
#include "quiltkit/symplectic.hpp"
