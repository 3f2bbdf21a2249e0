#pragma once

#include "semcom/assignment_km.hpp"
#include "semcom/bnb_joint.hpp"
#include "semcom/core_model.hpp"
#include "semcom/errors.hpp"
#include "semcom/experiment.hpp"
#include "semcom/fp_dinkelbach.hpp"
#include "semcom/joint_types.hpp"
#include "semcom/lp_simplex.hpp"
#include "semcom/oracle.hpp"
#include "semcom/scenario_gen.hpp"
#include "semcom/scenario_io.hpp"
