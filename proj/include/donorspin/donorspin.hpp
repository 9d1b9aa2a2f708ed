#pragma once

#include "donorspin/errors.hpp"
#include "donorspin/core_params.hpp"
#include "donorspin/numerics.hpp"
#include "donorspin/single_donor.hpp"
#include "donorspin/effective_mass.hpp"
#include "donorspin/gate_stark.hpp"
#include "donorspin/two_donor.hpp"
#include "donorspin/sweep.hpp"
#include "donorspin/export.hpp"
#include "donorspin/presets.hpp"
#include "donorspin/report.hpp"
