#pragma once

#include "dol/classify.hpp"
#include "dol/common.hpp"
#include "dol/cones.hpp"
#include "dol/dense.hpp"
#include "dol/harness.hpp"
#include "dol/integrator.hpp"
#include "dol/io.hpp"
#include "dol/model.hpp"
#include "dol/sampling.hpp"
#include "dol/segment.hpp"
#include "dol/spectrum.hpp"
#include "dol/zeros.hpp"
