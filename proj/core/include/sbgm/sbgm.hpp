#pragma once

#include "sbgm/datagen.hpp"
#include "sbgm/errors.hpp"
#include "sbgm/penalty.hpp"
#include "sbgm/solver.hpp"
#include "sbgm/symmat.hpp"
